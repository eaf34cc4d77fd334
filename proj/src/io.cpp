#include "folknet/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace folknet::io {

namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

/// Returns the index of the first byte that is not part of valid UTF-8, or npos.
std::size_t invalid_utf8_at(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return i;
        }
        if (i + len > s.size()) return i;
        for (std::size_t k = 1; k < len; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cc & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

/// Pulls physical lines from a stream, tracking line numbers and byte offsets.
class LineSource {
public:
    explicit LineSource(std::istream& in) : in_(in) {}

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        const std::size_t start = offset_;
        offset_ += line.size() + 1;
        if (auto bad = invalid_utf8_at(line); bad != std::string_view::npos)
            throw DataError("invalid UTF-8 at byte offset " + std::to_string(start + bad) + " (line " +
                            std::to_string(line_no_) + ")");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }
    std::size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    std::size_t line_no_ = 0;
    std::size_t offset_ = 0;
};

struct Record {
    std::vector<std::string> fields;
    std::size_t line = 0;
    bool quote_error = false;
};

bool read_tsv(LineSource& src, Record& rec) {
    std::string line;
    if (!src.next(line)) return false;
    rec = {};
    rec.line = src.line_no();
    std::string_view rest = line;
    for (;;) {
        const auto tab = rest.find('\t');
        rec.fields.emplace_back(rest.substr(0, tab));
        if (tab == std::string_view::npos) break;
        rest.remove_prefix(tab + 1);
    }
    return true;
}

/// RFC 4180 record; quoted fields may span lines.
bool read_csv(LineSource& src, Record& rec) {
    std::string line;
    if (!src.next(line)) return false;
    rec = {};
    rec.line = src.line_no();
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    for (;;) {
        if (i >= line.size()) {
            if (quoted) {
                if (!src.next(line)) {
                    rec.quote_error = true;
                    break;
                }
                field += '\n';
                i = 0;
                continue;
            }
            break;
        }
        const char ch = line[i++];
        if (quoted) {
            if (ch == '"') {
                if (i < line.size() && line[i] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            rec.fields.push_back(std::move(field));
            field.clear();
        } else {
            field += ch;
        }
    }
    rec.fields.push_back(std::move(field));
    return true;
}

std::string csv_escape(std::string_view s) {
    const bool needs = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                       (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                                       std::isspace(static_cast<unsigned char>(s.back()))));
    if (!needs) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw DataError("error writing '" + path.string() + "'");
}

std::string hex_color(const Rgb& c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

TripleFormat parse_format(std::string_view text) {
    if (text == "tsv") return TripleFormat::tsv;
    if (text == "csv") return TripleFormat::csv;
    throw std::invalid_argument("unknown format '" + std::string(text) + "' (expected tsv or csv)");
}

ReadResult read_triples(std::istream& in, TripleFormat format, bool strict) {
    ReadResult result;
    LineSource src(in);
    std::unordered_map<std::string, std::size_t> group;
    std::vector<std::unordered_set<std::string>> seen_tags;
    Record rec;
    bool first = true;

    auto reject = [&](std::size_t line, std::string message) {
        if (strict) throw DataError("line " + std::to_string(line) + ": " + message);
        result.warnings.push_back({line, std::move(message)});
    };

    while (format == TripleFormat::tsv ? read_tsv(src, rec) : read_csv(src, rec)) {
        const bool is_first = first;
        first = false;
        if (rec.fields.size() == 1 && trim(rec.fields[0]).empty()) continue;  // blank line
        if (rec.quote_error) {
            reject(rec.line, "unterminated quoted field");
            continue;
        }
        if (rec.fields.size() != 3) {
            reject(rec.line, "expected 3 columns, found " + std::to_string(rec.fields.size()));
            continue;
        }
        const auto user = trim(rec.fields[0]);
        const auto item = trim(rec.fields[1]);
        const auto tag = trim(rec.fields[2]);
        if (is_first && user == "user" && item == "item" && tag == "tag") continue;
        if (user.empty() || item.empty() || tag.empty()) {
            reject(rec.line, "empty field");
            continue;
        }

        std::string key;
        key.reserve(user.size() + item.size() + 1);
        key.append(user).push_back('\0');
        key.append(item);
        auto [it, inserted] = group.try_emplace(std::move(key), result.events.size());
        if (inserted) {
            result.events.push_back({std::string(user), std::string(item), {}});
            seen_tags.emplace_back();
        }
        if (seen_tags[it->second].emplace(tag).second) result.events[it->second].tags.emplace_back(tag);
        ++result.records;
    }
    return result;
}

ReadResult read_triples(const std::filesystem::path& path, TripleFormat format, bool strict) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    return read_triples(in, format, strict);
}

void write_triples(std::span<const TaggingEvent> events, std::ostream& out, TripleFormat format) {
    if (format == TripleFormat::tsv) {
        out << "user\titem\ttag\n";
        for (const auto& e : events) {
            for (const auto& tag : e.tags) {
                for (std::string_view f : {std::string_view(e.user), std::string_view(e.item), std::string_view(tag)})
                    if (f.find_first_of("\t\r\n") != std::string_view::npos)
                        throw DataError("field '" + std::string(f) + "' cannot be written as TSV");
                out << e.user << '\t' << e.item << '\t' << tag << '\n';
            }
        }
    } else {
        out << "user,item,tag\n";
        for (const auto& e : events)
            for (const auto& tag : e.tags)
                out << csv_escape(e.user) << ',' << csv_escape(e.item) << ',' << csv_escape(tag) << '\n';
    }
}

void write_triples(std::span<const TaggingEvent> events, const std::filesystem::path& path, TripleFormat format) {
    auto out = open_out(path);
    write_triples(events, out, format);
    finish_out(out, path);
}

std::string matrix_csv(const CorrelationMatrix& c, const EntityRegistry& names) {
    const std::size_t n = c.size();
    const auto values = c.to_dense();
    std::string out;
    for (EntityId id : c.members()) {
        out += ',';
        out += csv_escape(names.name(id));
    }
    out += '\n';
    for (std::size_t a = 0; a < n; ++a) {
        out += csv_escape(names.name(c.members()[a]));
        for (std::size_t b = 0; b < n; ++b) {
            out += ',';
            out += fixed6(values[a * n + b]);
        }
        out += '\n';
    }
    return out;
}

void write_matrix(const CorrelationMatrix& c, const EntityRegistry& names, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << matrix_csv(c, names);
    finish_out(out, path);
}

MatrixTable read_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read '" + path.string() + "'");
    LineSource src(in);
    Record rec;
    MatrixTable table;
    if (!read_csv(src, rec)) return table;
    table.names.assign(rec.fields.begin() + 1, rec.fields.end());
    const std::size_t n = table.names.size();
    while (read_csv(src, rec)) {
        if (rec.fields.size() != n + 1) throw DataError("matrix line " + std::to_string(rec.line) + ": bad width");
        for (std::size_t b = 1; b <= n; ++b) table.values.push_back(std::stod(rec.fields[b]));
    }
    if (table.values.size() != n * n) throw DataError("matrix is not square");
    return table;
}

void check_report(const IslandTree& tree, const ActivityReport& report) {
    if (report.tree_islands != tree.islands.size() || report.records.size() != tree.islands.size())
        throw std::invalid_argument("activity report does not match the tree");
    for (std::size_t k = 0; k < report.records.size(); ++k)
        if (report.records[k].island != k) throw std::invalid_argument("activity report does not match the tree");
}

namespace {

nlohmann::json island_json(const Island& island, const EntityRegistry& names, const ActivityReport* report) {
    nlohmann::json j;
    j["id"] = island.id;
    j["level"] = island.level;
    j["phi"] = island.level == Island::kRootLevel ? nlohmann::json(nullptr) : nlohmann::json(island.phi);
    auto members = nlohmann::json::array();
    for (EntityId id : island.members) members.push_back(names.name(id));
    j["members"] = std::move(members);
    j["size"] = island.size();
    j["parent"] = island.id == Island::kRoot ? nlohmann::json(nullptr) : nlohmann::json(island.parent);
    j["characteristic"] = island.members.empty() ? nlohmann::json(nullptr)
                                                 : nlohmann::json(names.name(island.characteristic));
    j["singleton"] = island.singleton();
    if (report) {
        const auto& rec = report->records[island.id];
        j["p_sample"] = rec.p_sample;
        j["p_user"] = rec.p_user;
        j["r"] = rec.ratio ? nlohmann::json(*rec.ratio) : nlohmann::json(nullptr);
        j["color"] = {rec.color.r, rec.color.g, rec.color.b};
    }
    return j;
}

}  // namespace

std::string tree_json(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report) {
    if (report) check_report(tree, *report);
    nlohmann::json doc;
    doc["family"] = std::string(to_string(tree.family));
    doc["levels"] = tree.levels;
    doc["root"] = island_json(tree.root(), names, report);
    auto islands = nlohmann::json::array();
    for (std::size_t k = 1; k < tree.islands.size(); ++k) islands.push_back(island_json(tree.islands[k], names, report));
    doc["islands"] = std::move(islands);
    return doc.dump(2) + "\n";
}

void write_tree_json(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report,
                     const std::filesystem::path& path) {
    const auto text = tree_json(tree, names, report);
    auto out = open_out(path);
    out << text;
    finish_out(out, path);
}

std::string tree_dot(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report,
                     const DotOptions& options) {
    if (report) check_report(tree, *report);
    std::ostringstream out;
    out << "digraph islands {\n";
    out << "  node [shape=square, fixedsize=true, fontsize=10];\n";
    auto node = [&](const Island& island, std::string_view label) {
        char width[32];
        std::snprintf(width, sizeof width, "%.4f", options.width_scale * std::sqrt(static_cast<double>(island.size())));
        out << "  n" << island.id << " [label=" << dot_quote(label) << ", width=" << width
            << ", members=" << island.size();
        if (report) out << ", style=filled, fillcolor=\"" << hex_color(report->records[island.id].color) << "\"";
        out << "];\n";
    };
    node(tree.root(), "root");
    for (std::size_t k = 1; k < tree.islands.size(); ++k) {
        const auto& island = tree.islands[k];
        if (island.singleton() && !options.include_singletons) continue;
        node(island, names.name(island.characteristic));
        out << "  n" << island.parent << " -> n" << island.id << ";\n";
    }
    out << "}\n";
    return out.str();
}

void write_tree_dot(const IslandTree& tree, const EntityRegistry& names, const ActivityReport* report,
                    const std::filesystem::path& path, const DotOptions& options) {
    const auto text = tree_dot(tree, names, report, options);
    auto out = open_out(path);
    out << text;
    finish_out(out, path);
}

}  // namespace folknet::io
