#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "folknet/projection.hpp"

namespace folknet {

/// Threshold levels phi_t = start + t * step, snapped to 12 decimals so that
/// grid values compare equal to the same decimal literal.
struct FilterGrid {
    double start = 0.0;
    double step = 0.05;

    void validate() const;
    double level(std::size_t t) const;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Undirected edges (a < b, matrix positions) whose correlation is strictly above phi.
std::vector<Edge> filter_edges(const CorrelationMatrix& c, double phi);

/// Partition of positions 0..n-1 into connected components. Each component is
/// sorted; components are ordered by their smallest position.
std::vector<std::vector<std::uint32_t>> components(std::span<const Edge> edges, std::size_t n);

struct Island {
    static constexpr std::size_t kRoot = 0;
    static constexpr int kRootLevel = -1;

    std::size_t id = 0;
    int level = kRootLevel;
    double phi = 0.0;                ///< meaningless for the root
    std::vector<EntityId> members;   ///< sorted entity ids
    std::size_t parent = kRoot;      ///< parent island id; the root is its own parent
    EntityId characteristic = 0;

    std::size_t size() const { return members.size(); }
    bool singleton() const { return members.size() == 1; }
};

/// Branching tree of islands across filter levels, hung under a virtual root
/// that holds every member. Island ids are 1.. ordered by (level, smallest member).
struct IslandTree {
    EntityKind family = EntityKind::tag;
    std::vector<double> levels;
    std::vector<Island> islands;  ///< islands[0] is the root
    std::vector<std::size_t> level_begin;  ///< island id range of level t: [level_begin[t], level_begin[t+1])

    const Island& root() const { return islands.front(); }
    std::span<const Island> level_islands(std::size_t t) const {
        return std::span<const Island>(islands).subspan(level_begin[t], level_begin[t + 1] - level_begin[t]);
    }
    std::vector<std::size_t> children(std::size_t id) const;
};

/// Member of `members` maximizing the summed correlation to the others
/// (diagonal included); ties go to the smallest entity id.
EntityId characteristic_element(std::span<const EntityId> members, const CorrelationMatrix& c);
inline EntityId characteristic_element(const Island& island, const CorrelationMatrix& c) {
    return characteristic_element(island.members, c);
}

/// Sweeps the grid until every island is a singleton, or until the next level
/// would reach phi >= 1 (entries equal to 1 never erode).
IslandTree build_tree(const CorrelationMatrix& c, const FilterGrid& grid = {});

}  // namespace folknet
