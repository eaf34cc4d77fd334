#include "folknet/projection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <thread>

namespace folknet {

namespace {

SignatureVector from_map(EntityKind owner_kind, EntityId owner, EntityKind axis,
                         const std::map<EntityId, double>& acc) {
    SignatureVector sig{owner_kind, owner, axis, {}};
    sig.entries.reserve(acc.size());
    for (const auto& [coord, v] : acc)
        if (v > 0.0) sig.entries.emplace_back(coord, v);
    return sig;
}

void check_id(const TripartiteNetwork& net, EntityKind kind, EntityId id) {
    if (id >= net.registry(kind).size())
        throw DataError("unknown " + std::string(to_string(kind)) + " id " + std::to_string(id));
}

}  // namespace

double SignatureVector::value(EntityId coordinate) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), coordinate,
                               [](const auto& e, EntityId c) { return e.first < c; });
    return (it != entries.end() && it->first == coordinate) ? it->second : 0.0;
}

double SignatureVector::norm() const {
    double sq = 0.0;
    for (const auto& e : entries) sq += e.second * e.second;
    return std::sqrt(sq);
}

SignatureVector user_item_signature(const TripartiteNetwork& net, EntityId user) {
    check_id(net, EntityKind::user, user);
    std::map<EntityId, double> acc;
    for (auto idx : net.ownerships_of_user(user)) {
        const auto& own = net.ownerships()[idx];
        // Summing the k link weights of 1/k gives exactly one per owned item.
        Rational total;
        for (std::size_t t = 0; t < own.tags.size(); ++t) total += own.link_weight();
        acc[own.item] += total.to_double();
    }
    return from_map(EntityKind::user, user, EntityKind::item, acc);
}

SignatureVector item_user_signature(const TripartiteNetwork& net, EntityId item) {
    check_id(net, EntityKind::item, item);
    std::map<EntityId, double> acc;
    for (auto idx : net.ownerships_of_item(item)) {
        const auto& own = net.ownerships()[idx];
        Rational total;
        for (std::size_t t = 0; t < own.tags.size(); ++t) total += own.link_weight();
        acc[own.user] += total.to_double();
    }
    return from_map(EntityKind::item, item, EntityKind::user, acc);
}

SignatureVector item_tag_signature(const TripartiteNetwork& net, EntityId item) {
    check_id(net, EntityKind::item, item);
    std::map<EntityId, double> acc;
    for (auto idx : net.ownerships_of_item(item)) {
        const auto& own = net.ownerships()[idx];
        const double w = own.link_weight().to_double();
        for (EntityId tag : own.tags) acc[tag] += w;
    }
    return from_map(EntityKind::item, item, EntityKind::tag, acc);
}

SignatureVector tag_item_signature(const TripartiteNetwork& net, EntityId tag, TagItemWeighting weighting) {
    check_id(net, EntityKind::tag, tag);
    std::map<EntityId, double> acc;
    for (auto idx : net.ownerships_of_tag(tag)) {
        const auto& own = net.ownerships()[idx];
        if (weighting == TagItemWeighting::binary)
            acc[own.item] = 1.0;
        else
            acc[own.item] += own.link_weight().to_double();
    }
    return from_map(EntityKind::tag, tag, EntityKind::item, acc);
}

double cosine(const SignatureVector& u, const SignatureVector& v) {
    if (u.axis != v.axis) throw std::invalid_argument("cosine: signature axes differ");
    if (u.empty() || v.empty()) return 0.0;
    double dot = 0.0;
    auto a = u.entries.begin();
    auto b = v.entries.begin();
    while (a != u.entries.end() && b != v.entries.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            dot += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return std::min(1.0, dot / (u.norm() * v.norm()));
}

std::string_view to_string(View view) {
    switch (view) {
        case View::users_via_items: return "users-via-items";
        case View::items_via_users: return "items-via-users";
        case View::items_via_tags: return "items-via-tags";
        case View::tags_via_items: return "tags-via-items";
    }
    return "?";
}

View parse_view(std::string_view text) {
    for (View v : {View::users_via_items, View::items_via_users, View::items_via_tags, View::tags_via_items})
        if (text == to_string(v)) return v;
    throw std::invalid_argument("unknown view '" + std::string(text) + "'");
}

EntityKind view_family(View view) {
    switch (view) {
        case View::users_via_items: return EntityKind::user;
        case View::items_via_users:
        case View::items_via_tags: return EntityKind::item;
        case View::tags_via_items: return EntityKind::tag;
    }
    return EntityKind::tag;
}

EntityKind view_axis(View view) {
    switch (view) {
        case View::users_via_items:
        case View::tags_via_items: return EntityKind::item;
        case View::items_via_users: return EntityKind::user;
        case View::items_via_tags: return EntityKind::tag;
    }
    return EntityKind::item;
}

View view_for(EntityKind family, EntityKind axis) {
    for (View v : {View::users_via_items, View::items_via_users, View::items_via_tags, View::tags_via_items})
        if (view_family(v) == family && view_axis(v) == axis) return v;
    throw std::invalid_argument("unsupported view: " + std::string(to_string(family)) + "s via " +
                                std::string(to_string(axis)) + "s");
}

View default_view(EntityKind family) {
    switch (family) {
        case EntityKind::user: return View::users_via_items;
        case EntityKind::item: return View::items_via_users;
        case EntityKind::tag: return View::tags_via_items;
    }
    return View::tags_via_items;
}

SignatureVector signature(const TripartiteNetwork& net, View view, EntityId id, TagItemWeighting tag_weighting) {
    switch (view) {
        case View::users_via_items: return user_item_signature(net, id);
        case View::items_via_users: return item_user_signature(net, id);
        case View::items_via_tags: return item_tag_signature(net, id);
        case View::tags_via_items: return tag_item_signature(net, id, tag_weighting);
    }
    throw std::invalid_argument("bad view");
}

void CorrelationMatrix::index_members() {
    position_.clear();
    for (std::size_t p = 0; p < members_.size(); ++p) {
        const EntityId id = members_[p];
        if (id >= position_.size()) position_.resize(static_cast<std::size_t>(id) + 1, 0);
        if (position_[id] != 0) throw std::invalid_argument("duplicate correlation matrix member");
        position_[id] = p + 1;
    }
}

std::optional<std::size_t> CorrelationMatrix::position_of(EntityId id) const {
    if (id >= position_.size() || position_[id] == 0) return std::nullopt;
    return position_[id] - 1;
}

double CorrelationMatrix::operator()(std::size_t a, std::size_t b) const {
    const std::size_t n = size();
    if (a >= n || b >= n) throw std::out_of_range("correlation matrix index");
    if (is_dense()) return dense_[a * n + b];
    const auto& row = rows_[a];
    auto it = std::lower_bound(row.begin(), row.end(), b, [](const auto& e, std::size_t c) { return e.first < c; });
    return (it != row.end() && it->first == b) ? it->second : 0.0;
}

std::vector<double> CorrelationMatrix::to_dense() const {
    if (is_dense()) return dense_;
    const std::size_t n = size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (const auto& [b, v] : rows_[a]) out[a * n + b] = v;
    return out;
}

CorrelationMatrix CorrelationMatrix::from_dense(EntityKind family, View view, std::vector<EntityId> members,
                                                std::vector<double> values) {
    const std::size_t n = members.size();
    if (values.size() != n * n) throw std::invalid_argument("correlation matrix: value count is not n*n");
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double v = values[a * n + b];
            if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("correlation matrix: entry outside [0,1]");
            if (v != values[b * n + a]) throw std::invalid_argument("correlation matrix: not symmetric");
        }
    }
    CorrelationMatrix m;
    m.family_ = family;
    m.view_ = view;
    m.members_ = std::move(members);
    m.dense_ = std::move(values);
    m.zero_signature_.assign(n, false);
    for (std::size_t a = 0; a < n; ++a) m.zero_signature_[a] = m.dense_[a * n + a] == 0.0;
    m.index_members();
    return m;
}

CorrelationMatrix correlation_matrix(const TripartiteNetwork& net, View view,
                                     std::optional<std::vector<EntityId>> members,
                                     const CorrelationOptions& options) {
    const EntityKind family = view_family(view);
    CorrelationMatrix m;
    m.family_ = family;
    m.view_ = view;
    if (members) {
        m.members_ = std::move(*members);
    } else {
        m.members_.resize(net.registry(family).size());
        std::iota(m.members_.begin(), m.members_.end(), EntityId{0});
    }
    m.index_members();

    const std::size_t n = m.members_.size();
    std::vector<SignatureVector> sigs;
    sigs.reserve(n);
    std::vector<double> norms(n);
    m.zero_signature_.assign(n, false);
    std::size_t axis_size = net.registry(view_axis(view)).size();
    for (std::size_t p = 0; p < n; ++p) {
        sigs.push_back(signature(net, view, m.members_[p], options.tag_weighting));
        norms[p] = sigs[p].norm();
        m.zero_signature_[p] = sigs[p].empty();
    }

    // Inverted index: coordinate -> (position, value), ascending position.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> postings(axis_size);
    for (std::size_t p = 0; p < n; ++p)
        for (const auto& [c, v] : sigs[p].entries) postings[c].emplace_back(static_cast<std::uint32_t>(p), v);

    // Upper-triangle rows. Each dot product is accumulated in ascending
    // coordinate order, the same order cosine() uses.
    std::vector<CorrelationMatrix::Row> upper(n);
    auto compute_rows = [&](std::size_t begin, std::size_t end) {
        std::vector<double> dot(n, 0.0);
        std::vector<std::uint32_t> touched;
        for (std::size_t a = begin; a < end; ++a) {
            touched.clear();
            for (const auto& [c, wa] : sigs[a].entries) {
                const auto& post = postings[c];
                auto it = std::upper_bound(post.begin(), post.end(), a,
                                           [](std::size_t x, const auto& e) { return x < e.first; });
                for (; it != post.end(); ++it) {
                    if (dot[it->first] == 0.0) touched.push_back(it->first);
                    dot[it->first] += wa * it->second;
                }
            }
            std::sort(touched.begin(), touched.end());
            auto& row = upper[a];
            row.reserve(touched.size());
            for (auto b : touched) {
                const double v = std::min(1.0, dot[b] / (norms[a] * norms[b]));
                if (v > 0.0) row.emplace_back(b, v);
                dot[b] = 0.0;
            }
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        compute_rows(0, n);
    } else {
        std::vector<std::jthread> pool;
        // Interleaved blocks balance the shrinking upper-triangle rows.
        const std::size_t block = 16;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t start = t * block; start < n; start += threads * block)
                    compute_rows(start, std::min(n, start + block));
            });
        }
    }

    if (n <= options.dense_limit) {
        m.dense_.assign(n * n, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            m.dense_[a * n + a] = m.zero_signature_[a] ? 0.0 : 1.0;
            for (const auto& [b, v] : upper[a]) {
                m.dense_[a * n + b] = v;
                m.dense_[b * n + a] = v;
            }
        }
    } else {
        m.rows_.assign(n, {});
        for (std::size_t a = 0; a < n; ++a) {
            auto& row = m.rows_[a];
            if (!m.zero_signature_[a]) row.emplace_back(static_cast<std::uint32_t>(a), 1.0);
            row.insert(row.end(), upper[a].begin(), upper[a].end());
            for (const auto& [b, v] : upper[a]) m.rows_[b].emplace_back(static_cast<std::uint32_t>(a), v);
        }
    }
    return m;
}

std::size_t usage(const TripartiteNetwork& net, EntityKind family, EntityId id) {
    switch (family) {
        case EntityKind::user: return net.ownerships_of_user(id).size();
        case EntityKind::item: return net.ownerships_of_item(id).size();
        case EntityKind::tag: return net.ownerships_of_tag(id).size();
    }
    return 0;
}

std::vector<EntityId> top_n(const TripartiteNetwork& net, EntityKind family, std::size_t n) {
    if (n == 0) throw std::invalid_argument("top_n: n must be at least 1");
    const std::size_t count = net.registry(family).size();
    std::vector<EntityId> ids(count);
    std::iota(ids.begin(), ids.end(), EntityId{0});
    std::vector<std::size_t> use(count);
    for (EntityId id = 0; id < count; ++id) use[id] = usage(net, family, id);
    const std::size_t k = std::min(n, count);
    std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(k), ids.end(),
                      [&](EntityId a, EntityId b) { return use[a] != use[b] ? use[a] > use[b] : a < b; });
    ids.resize(k);
    return ids;
}

}  // namespace folknet
