#include "folknet/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace folknet {

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank_[a] < rank_[b]) std::swap(a, b);
        parent_[b] = a;
        if (rank_[a] == rank_[b]) ++rank_[a];
    }

private:
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint8_t> rank_;
};

}  // namespace

void FilterGrid::validate() const {
    if (!(start >= 0.0 && start < 1.0)) throw std::invalid_argument("filter grid: start must lie in [0,1)");
    if (!(step > 0.0)) throw std::invalid_argument("filter grid: step must be positive");
}

double FilterGrid::level(std::size_t t) const {
    const double raw = start + static_cast<double>(t) * step;
    return std::round(raw * 1e12) / 1e12;
}

std::vector<Edge> filter_edges(const CorrelationMatrix& c, double phi) {
    if (!(phi >= 0.0 && phi < 1.0)) throw std::invalid_argument("filter_edges: phi must lie in [0,1)");
    std::vector<Edge> edges;
    c.for_each_upper([&](std::size_t a, std::size_t b, double v) {
        if (v > phi) edges.emplace_back(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
    });
    return edges;
}

std::vector<std::vector<std::uint32_t>> components(std::span<const Edge> edges, std::size_t n) {
    DisjointSets sets(n);
    for (const auto& [a, b] : edges) {
        if (a >= n || b >= n) throw std::invalid_argument("components: edge references unknown member");
        sets.unite(a, b);
    }
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::size_t> slot(n, SIZE_MAX);
    for (std::uint32_t x = 0; x < n; ++x) {
        const auto r = sets.find(x);
        if (slot[r] == SIZE_MAX) {
            slot[r] = out.size();
            out.emplace_back();
        }
        out[slot[r]].push_back(x);
    }
    return out;
}

EntityId characteristic_element(std::span<const EntityId> members, const CorrelationMatrix& c) {
    if (members.empty()) throw std::invalid_argument("characteristic_element: empty island");
    std::vector<EntityId> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> pos(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        auto p = c.position_of(sorted[k]);
        if (!p) throw std::invalid_argument("characteristic_element: member not in matrix");
        pos[k] = *p;
    }
    EntityId best = sorted.front();
    double best_sum = -1.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        double sum = 0.0;
        for (std::size_t j = 0; j < sorted.size(); ++j) sum += c(pos[k], pos[j]);
        if (sum > best_sum) {
            best_sum = sum;
            best = sorted[k];
        }
    }
    return best;
}

std::vector<std::size_t> IslandTree::children(std::size_t id) const {
    std::vector<std::size_t> out;
    for (std::size_t k = 1; k < islands.size(); ++k)
        if (islands[k].parent == id) out.push_back(k);
    return out;
}

IslandTree build_tree(const CorrelationMatrix& c, const FilterGrid& grid) {
    grid.validate();
    const std::size_t n = c.size();
    const auto ids = c.members();

    IslandTree tree;
    tree.family = c.family();
    Island root;
    root.id = Island::kRoot;
    root.members.assign(ids.begin(), ids.end());
    std::sort(root.members.begin(), root.members.end());
    if (n > 0) root.characteristic = characteristic_element(root.members, c);
    tree.islands.push_back(std::move(root));
    tree.level_begin.push_back(1);
    if (n == 0) return tree;

    // owner[p]: island id containing position p at the previous level.
    std::vector<std::size_t> owner(n, Island::kRoot);
    for (std::size_t t = 0;; ++t) {
        const double phi = grid.level(t);
        if (phi >= 1.0) break;

        auto parts = components(filter_edges(c, phi), n);
        std::vector<Island> level;
        level.reserve(parts.size());
        bool all_singletons = true;
        for (const auto& part : parts) {
            Island island;
            island.level = static_cast<int>(t);
            island.phi = phi;
            island.parent = owner[part.front()];
            island.members.reserve(part.size());
            for (auto p : part) island.members.push_back(ids[p]);
            std::sort(island.members.begin(), island.members.end());
            island.characteristic = characteristic_element(island.members, c);
            all_singletons = all_singletons && part.size() == 1;
            level.push_back(std::move(island));
        }
        std::sort(level.begin(), level.end(),
                  [](const Island& a, const Island& b) { return a.members.front() < b.members.front(); });

        const std::size_t first_id = tree.islands.size();
        for (std::size_t k = 0; k < level.size(); ++k) {
            level[k].id = first_id + k;
            for (EntityId member : level[k].members) owner[*c.position_of(member)] = level[k].id;
            tree.islands.push_back(std::move(level[k]));
        }
        tree.levels.push_back(phi);
        tree.level_begin.push_back(tree.islands.size());
        if (all_singletons) break;
    }
    return tree;
}

}  // namespace folknet
