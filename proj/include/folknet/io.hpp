#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "folknet/diversity.hpp"
#include "folknet/model.hpp"
#include "folknet/percolation.hpp"

namespace folknet::io {

enum class TripleFormat { tsv, csv };

TripleFormat parse_format(std::string_view text);

struct ReadDiagnostic {
    std::size_t line = 0;
    std::string message;
};

struct ReadResult {
    std::vector<TaggingEvent> events;  ///< one per (user, item), first-seen order
    std::vector<ReadDiagnostic> warnings;
    std::size_t records = 0;           ///< accepted triple lines
};

/// Reads one attribution (user, item, tag) per line and groups lines by
/// (user, item). A leading header "user item tag" is skipped. Malformed lines
/// are skipped with a warning, or abort with DataError when strict. Invalid
/// UTF-8 always aborts, reporting the byte offset.
ReadResult read_triples(std::istream& in, TripleFormat format = TripleFormat::tsv, bool strict = false);
ReadResult read_triples(const std::filesystem::path& path, TripleFormat format = TripleFormat::tsv,
                        bool strict = false);

/// Writes events back as one triple per line with a header row.
void write_triples(std::span<const TaggingEvent> events, std::ostream& out, TripleFormat format = TripleFormat::tsv);
void write_triples(std::span<const TaggingEvent> events, const std::filesystem::path& path,
                   TripleFormat format = TripleFormat::tsv);

/// CSV with a header row and column of member names, 6 decimals per value.
std::string matrix_csv(const CorrelationMatrix& c, const EntityRegistry& names);
void write_matrix(const CorrelationMatrix& c, const EntityRegistry& names, const std::filesystem::path& path);

struct MatrixTable {
    std::vector<std::string> names;
    std::vector<double> values;  ///< row-major
};
MatrixTable read_matrix(const std::filesystem::path& path);

/// Deterministic JSON rendering of a tree, optionally annotated with activity.
std::string tree_json(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report = nullptr);
void write_tree_json(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report,
                     const std::filesystem::path& path);

struct DotOptions {
    bool include_singletons = false;
    double width_scale = 0.3;  ///< node width = width_scale * sqrt(size)
};

std::string tree_dot(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report = nullptr,
                     const DotOptions& options = {});
void write_tree_dot(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report,
                    const std::filesystem::path& path, const DotOptions& options = {});

/// Throws std::invalid_argument if `report` was not computed for `tree`.
void check_report(const IslandTree& tree, const ActivityReport& report);

}  // namespace folknet::io
