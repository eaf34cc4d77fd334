#include "folknet/model.hpp"

#include <algorithm>
#include <cctype>

namespace folknet {

std::string_view to_string(EntityKind kind) {
    switch (kind) {
        case EntityKind::user: return "user";
        case EntityKind::item: return "item";
        case EntityKind::tag: return "tag";
    }
    return "?";
}

EntityKind parse_entity_kind(std::string_view text) {
    if (text == "user" || text == "users") return EntityKind::user;
    if (text == "item" || text == "items") return EntityKind::item;
    if (text == "tag" || text == "tags") return EntityKind::tag;
    throw std::invalid_argument("unknown entity family '" + std::string(text) + "'");
}

EntityId EntityRegistry::intern(std::string_view name) {
    std::string key(name);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const auto id = static_cast<EntityId>(names_.size());
    names_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<EntityId> EntityRegistry::find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
}

EntityId EntityRegistry::require(std::string_view name) const {
    if (auto id = find(name)) return *id;
    throw DataError("unknown " + std::string(to_string(kind_)) + " '" + std::string(name) + "'");
}

TagNormalization parse_tag_normalization(std::string_view text) {
    if (text == "trim-casefold" || text == "default") return TagNormalization::trim_casefold;
    if (text == "exact") return TagNormalization::exact;
    throw std::invalid_argument("unknown tag normalization '" + std::string(text) + "'");
}

std::string normalize_tag(std::string_view tag, TagNormalization policy) {
    if (policy == TagNormalization::exact) return std::string(tag);
    auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!tag.empty() && is_space(tag.front())) tag.remove_prefix(1);
    while (!tag.empty() && is_space(tag.back())) tag.remove_suffix(1);
    std::string out(tag);
    // Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are left alone.
    for (char& c : out) {
        const auto u = static_cast<unsigned char>(c);
        if (u < 0x80) c = static_cast<char>(std::tolower(u));
    }
    return out;
}

TripartiteNetwork::TripartiteNetwork()
    : users_(EntityKind::user), items_(EntityKind::item), tags_(EntityKind::tag) {}

const EntityRegistry& TripartiteNetwork::registry(EntityKind kind) const {
    switch (kind) {
        case EntityKind::user: return users_;
        case EntityKind::item: return items_;
        case EntityKind::tag: return tags_;
    }
    throw std::invalid_argument("bad entity kind");
}

std::vector<Link> TripartiteNetwork::links() const {
    std::vector<Link> out;
    out.reserve(link_count_);
    for (const auto& own : ownerships_) {
        const Rational w = own.link_weight();
        for (EntityId tag : own.tags) out.push_back({own.user, own.item, tag, w});
    }
    return out;
}

bool TripartiteNetwork::owns(EntityId user, EntityId item) const {
    for (auto idx : by_user_.at(user)) {
        if (ownerships_[idx].item == item) return true;
    }
    return false;
}

Rational TripartiteNetwork::weight(EntityId user, EntityId item, EntityId tag) const {
    for (auto idx : by_user_.at(user)) {
        const auto& own = ownerships_[idx];
        if (own.item != item) continue;
        if (std::binary_search(own.tags.begin(), own.tags.end(), tag)) return own.link_weight();
        return Rational(0);
    }
    return Rational(0);
}

NetworkBuilder::NetworkBuilder(BuildOptions options) : options_(options) {}

bool NetworkBuilder::add(const TaggingEvent& event) {
    const std::size_t index = events_seen_++;

    std::vector<std::string> tags;
    tags.reserve(event.tags.size());
    for (const auto& raw : event.tags) {
        auto tag = normalize_tag(raw, options_.normalization);
        if (!tag.empty()) tags.push_back(std::move(tag));
    }
    std::string problem;
    if (event.user.empty() || event.item.empty()) {
        problem = "event has an empty user or item name";
    } else if (tags.empty()) {
        problem = "event (" + event.user + ", " + event.item + ") has no tags after normalization";
    }
    if (!problem.empty()) {
        if (options_.strict) throw DataError("event " + std::to_string(index) + ": " + problem);
        diagnostics_.push_back({index, std::move(problem)});
        return false;
    }

    const EntityId user = net_.users_.intern(event.user);
    const EntityId item = net_.items_.intern(event.item);
    const std::uint64_t key = (static_cast<std::uint64_t>(user) << 32) | item;
    auto [it, inserted] = group_index_.try_emplace(key, static_cast<std::uint32_t>(net_.ownerships_.size()));
    if (inserted) net_.ownerships_.push_back({user, item, {}});

    auto& group = net_.ownerships_[it->second].tags;
    for (const auto& name : tags) {
        const EntityId tag = net_.tags_.intern(name);
        auto pos = std::lower_bound(group.begin(), group.end(), tag);
        if (pos == group.end() || *pos != tag) group.insert(pos, tag);
    }
    return true;
}

TripartiteNetwork NetworkBuilder::finish() && {
    TripartiteNetwork net = std::move(net_);
    net.by_user_.assign(net.users_.size(), {});
    net.by_item_.assign(net.items_.size(), {});
    net.by_tag_.assign(net.tags_.size(), {});
    net.link_count_ = 0;
    for (std::uint32_t idx = 0; idx < net.ownerships_.size(); ++idx) {
        const auto& own = net.ownerships_[idx];
        net.by_user_[own.user].push_back(idx);
        net.by_item_[own.item].push_back(idx);
        for (EntityId tag : own.tags) net.by_tag_[tag].push_back(idx);
        net.link_count_ += own.tags.size();
    }
    group_index_.clear();
    return net;
}

BuildResult build_network(std::span<const TaggingEvent> events, BuildOptions options) {
    NetworkBuilder builder(options);
    for (const auto& event : events) builder.add(event);
    auto diagnostics = builder.diagnostics();
    return {std::move(builder).finish(), std::move(diagnostics)};
}

DegreeStats degree_stats(const TripartiteNetwork& net) {
    DegreeStats s;
    s.users = net.users().size();
    s.items = net.items().size();
    s.tags = net.tags().size();
    s.ownerships = net.ownerships().size();
    s.links = net.link_count();
    if (s.users > 0) s.items_per_user = static_cast<double>(s.ownerships) / static_cast<double>(s.users);
    if (s.items > 0) s.users_per_item = static_cast<double>(s.ownerships) / static_cast<double>(s.items);
    s.tag_usage.resize(s.tags);
    for (EntityId t = 0; t < s.tags; ++t) s.tag_usage[t] = net.ownerships_of_tag(t).size();
    return s;
}

}  // namespace folknet
