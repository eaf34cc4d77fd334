#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "folknet/common.hpp"
#include "folknet/rational.hpp"

namespace folknet {

/// Bijection between external names and dense ids for one entity family.
class EntityRegistry {
public:
    explicit EntityRegistry(EntityKind kind) : kind_(kind) {}

    EntityKind kind() const { return kind_; }
    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    /// Returns the id of `name`, registering it if unseen.
    EntityId intern(std::string_view name);
    std::optional<EntityId> find(std::string_view name) const;
    /// Like find(), but throws DataError naming the missing entity.
    EntityId require(std::string_view name) const;

    const std::string& name(EntityId id) const { return names_.at(id); }
    std::span<const std::string> names() const { return names_; }

private:
    EntityKind kind_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, EntityId> index_;
};

struct TaggingEvent {
    std::string user;
    std::string item;
    std::vector<std::string> tags;
};

enum class TagNormalization {
    trim_casefold,  ///< strip surrounding whitespace, ASCII lower-case
    exact,
};

TagNormalization parse_tag_normalization(std::string_view text);
std::string normalize_tag(std::string_view tag, TagNormalization policy);

/// One user's description of one item: the distinct tags used on it.
/// Every link of the group carries weight 1/k with k = tags.size().
struct Ownership {
    EntityId user = 0;
    EntityId item = 0;
    std::vector<EntityId> tags;  // sorted, unique, nonempty

    Rational link_weight() const { return Rational(1, static_cast<std::int64_t>(tags.size())); }
};

struct Link {
    EntityId user = 0;
    EntityId item = 0;
    EntityId tag = 0;
    Rational weight;
};

/// Immutable weighted user-item-tag network.
class TripartiteNetwork {
public:
    TripartiteNetwork();

    const EntityRegistry& users() const { return users_; }
    const EntityRegistry& items() const { return items_; }
    const EntityRegistry& tags() const { return tags_; }
    const EntityRegistry& registry(EntityKind kind) const;

    std::span<const Ownership> ownerships() const { return ownerships_; }
    std::size_t link_count() const { return link_count_; }
    std::vector<Link> links() const;

    /// Indices into ownerships() touching the given entity, ascending.
    std::span<const std::uint32_t> ownerships_of_user(EntityId user) const { return by_user_.at(user); }
    std::span<const std::uint32_t> ownerships_of_item(EntityId item) const { return by_item_.at(item); }
    std::span<const std::uint32_t> ownerships_of_tag(EntityId tag) const { return by_tag_.at(tag); }

    /// Weight of the (user, item, tag) link; zero when absent.
    Rational weight(EntityId user, EntityId item, EntityId tag) const;
    bool owns(EntityId user, EntityId item) const;

private:
    friend class NetworkBuilder;

    EntityRegistry users_;
    EntityRegistry items_;
    EntityRegistry tags_;
    std::vector<Ownership> ownerships_;
    std::vector<std::vector<std::uint32_t>> by_user_;
    std::vector<std::vector<std::uint32_t>> by_item_;
    std::vector<std::vector<std::uint32_t>> by_tag_;
    std::size_t link_count_ = 0;
};

struct BuildDiagnostic {
    std::size_t event_index = 0;
    std::string message;
};

struct BuildOptions {
    TagNormalization normalization = TagNormalization::trim_casefold;
    /// Throw DataError on the first rejected event instead of skipping it.
    bool strict = false;
};

/// Incremental builder. Repeated (user, item) events are merged by tag-set union.
class NetworkBuilder {
public:
    explicit NetworkBuilder(BuildOptions options = {});

    /// Returns false (and records a diagnostic) when the event is rejected.
    bool add(const TaggingEvent& event);
    const std::vector<BuildDiagnostic>& diagnostics() const { return diagnostics_; }
    TripartiteNetwork finish() &&;

private:
    BuildOptions options_;
    TripartiteNetwork net_;
    std::unordered_map<std::uint64_t, std::uint32_t> group_index_;
    std::vector<BuildDiagnostic> diagnostics_;
    std::size_t events_seen_ = 0;
};

struct BuildResult {
    TripartiteNetwork network;
    std::vector<BuildDiagnostic> diagnostics;
};

BuildResult build_network(std::span<const TaggingEvent> events, BuildOptions options = {});

struct DegreeStats {
    std::size_t users = 0;
    std::size_t items = 0;
    std::size_t tags = 0;
    std::size_t ownerships = 0;
    std::size_t links = 0;
    double items_per_user = 0.0;
    double users_per_item = 0.0;
    std::vector<std::size_t> tag_usage;  // links touching each tag, by tag id
};

DegreeStats degree_stats(const TripartiteNetwork& net);

}  // namespace folknet
