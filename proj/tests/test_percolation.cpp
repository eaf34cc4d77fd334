#include <doctest.h>

#include <numeric>

#include "folknet/percolation.hpp"
#include "oracles.hpp"

using namespace folknet;

namespace {

CorrelationMatrix dense(std::vector<double> values) {
    const auto n = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(values.size()))));
    std::vector<EntityId> members(n);
    std::iota(members.begin(), members.end(), EntityId{0});
    return CorrelationMatrix::from_dense(EntityKind::tag, View::tags_via_items, members, std::move(values));
}

CorrelationMatrix uniform(std::size_t n, double off) {
    std::vector<double> v(n * n, off);
    for (std::size_t a = 0; a < n; ++a) v[a * n + a] = 1.0;
    return dense(v);
}

/// Two blocks: members [0, split) and [split, n).
CorrelationMatrix two_blocks(std::size_t n, std::size_t split, double intra, double inter) {
    std::vector<double> v(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            v[a * n + b] = a == b ? 1.0 : ((a < split) == (b < split) ? intra : inter);
    return dense(v);
}

oracle::Partition level_partition(const IslandTree& tree, std::size_t t) {
    oracle::Partition p;
    for (const auto& island : tree.level_islands(t)) p.insert({island.members.begin(), island.members.end()});
    return p;
}

}  // namespace

TEST_CASE("grid levels") {
    FilterGrid grid;
    CHECK(grid.level(0) == 0.0);
    CHECK(grid.level(17) == 0.85);
    CHECK(grid.level(18) == 0.9);
    CHECK(FilterGrid{0.1, 0.05}.level(6) == 0.4);
    CHECK_THROWS_AS(FilterGrid({1.0, 0.05}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(FilterGrid({0.0, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("filter_edges") {
    CHECK(filter_edges(uniform(4, 0.2), 0.0).size() == 6);
    CHECK(filter_edges(uniform(4, 0.2), 0.2).empty());
    CHECK(filter_edges(uniform(4, 0.2), 0.5).empty());
    const auto c = dense({1, 0.3, 0.1,
                          0.3, 1, 0.2,
                          0.1, 0.2, 1});
    const auto edges = filter_edges(c, 0.15);
    CHECK(edges == std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK_THROWS_AS(filter_edges(c, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(filter_edges(c, -0.1), std::invalid_argument);
}

TEST_CASE("components") {
    CHECK(components({}, 3) == std::vector<std::vector<std::uint32_t>>{{0}, {1}, {2}});
    const std::vector<Edge> path{{0, 1}, {1, 2}};
    CHECK(components(path, 3) == std::vector<std::vector<std::uint32_t>>{{0, 1, 2}});
    const std::vector<Edge> bad{{0, 5}};
    CHECK_THROWS_AS(components(bad, 3), std::invalid_argument);
}

TEST_CASE("components match reachability closure on random graphs") {
    synth::Rng rng(17);
    for (int round = 0; round < 200; ++round) {
        const std::size_t n = 1 + rng.below(12);
        const auto values = oracle::random_matrix(rng, n);
        const auto c = dense(values);
        const double phi = static_cast<double>(rng.below(100)) / 100.0;
        oracle::Partition got;
        for (const auto& comp : components(filter_edges(c, phi), n)) got.insert({comp.begin(), comp.end()});
        std::vector<EntityId> members(n);
        std::iota(members.begin(), members.end(), EntityId{0});
        CHECK(got == oracle::reach_partition(values, members, phi));
    }
}

TEST_CASE("characteristic element") {
    const auto c = dense({1, 0.9, 0.8,
                          0.9, 1, 0.1,
                          0.8, 0.1, 1});
    const std::vector<EntityId> all{0, 1, 2};
    CHECK(characteristic_element(all, c) == 0);
    const std::vector<EntityId> one{2};
    CHECK(characteristic_element(one, c) == 2);
    const std::vector<EntityId> star{3, 1, 2};
    CHECK(characteristic_element(star, uniform(4, 0.5)) == 1);
}

TEST_CASE("uniform 0.9 matrix persists through 0.85 then shatters") {
    const auto tree = build_tree(uniform(5, 0.9));
    REQUIRE(tree.levels.size() == 19);
    for (std::size_t t = 0; t < 18; ++t) {
        REQUIRE(tree.level_islands(t).size() == 1);
        CHECK(tree.level_islands(t)[0].size() == 5);
    }
    CHECK(tree.levels[17] == 0.85);
    CHECK(tree.levels[18] == 0.9);
    CHECK(tree.level_islands(18).size() == 5);
}

TEST_CASE("two planted blocks split at 0.1 and hold until 0.8") {
    const auto tree = build_tree(two_blocks(7, 3, 0.8, 0.1));
    for (std::size_t t = 0; t < tree.levels.size(); ++t) {
        const double phi = tree.levels[t];
        const auto islands = tree.level_islands(t);
        if (phi < 0.1) {
            CHECK(islands.size() == 1);
        } else if (phi < 0.8) {
            REQUIRE(islands.size() == 2);
            CHECK(islands[0].members == std::vector<EntityId>{0, 1, 2});
            CHECK(islands[1].members == std::vector<EntityId>{3, 4, 5, 6});
            for (const auto& island : islands) CHECK(tree.islands[island.parent].size() >= island.size());
        } else {
            CHECK(islands.size() == 7);
        }
    }
    CHECK(tree.levels.back() == 0.8);
}

TEST_CASE("identity matrix yields root plus singleton leaves") {
    const auto tree = build_tree(uniform(4, 0.0));
    CHECK(tree.levels.size() == 1);
    CHECK(tree.islands.size() == 5);
    for (std::size_t k = 1; k < tree.islands.size(); ++k) {
        CHECK(tree.islands[k].singleton());
        CHECK(tree.islands[k].parent == Island::kRoot);
    }
    CHECK(tree.children(Island::kRoot).size() == 4);
}

TEST_CASE("entries equal to 1 never erode; the sweep stops below phi = 1") {
    const auto tree = build_tree(uniform(3, 1.0));
    CHECK(tree.levels.back() == 0.95);
    CHECK(tree.level_islands(tree.levels.size() - 1).size() == 1);
}

TEST_CASE("sparse matrices sweep identically") {
    std::vector<TaggingEvent> events;
    synth::Rng rng(23);
    for (int k = 0; k < 300; ++k)
        events.push_back({"u" + std::to_string(rng.below(20)), "i" + std::to_string(rng.below(30)),
                          {"t" + std::to_string(rng.below(25)), "t" + std::to_string(rng.below(25))}});
    const auto net = build_network(events).network;
    CorrelationOptions sparse_opts;
    sparse_opts.dense_limit = 0;
    const auto a = build_tree(correlation_matrix(net, View::tags_via_items));
    const auto b = build_tree(correlation_matrix(net, View::tags_via_items, std::nullopt, sparse_opts));
    REQUIRE(a.islands.size() == b.islands.size());
    for (std::size_t k = 0; k < a.islands.size(); ++k) {
        CHECK(a.islands[k].members == b.islands[k].members);
        CHECK(a.islands[k].parent == b.islands[k].parent);
        CHECK(a.islands[k].characteristic == b.islands[k].characteristic);
    }
}

TEST_CASE("property: tree independent of member order") {
    synth::Rng rng(29);
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 2 + rng.below(10);
        const auto values = oracle::random_matrix(rng, n);
        std::vector<EntityId> perm(n);
        std::iota(perm.begin(), perm.end(), EntityId{0});
        for (std::size_t k = n; k > 1; --k) std::swap(perm[k - 1], perm[rng.below(k)]);
        // Position p of the permuted matrix holds entity perm[p].
        std::vector<double> permuted(n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) permuted[a * n + b] = values[perm[a] * n + perm[b]];
        const auto t1 = build_tree(dense(values));
        const auto t2 = build_tree(CorrelationMatrix::from_dense(EntityKind::tag, View::tags_via_items, perm, permuted));
        REQUIRE(t1.islands.size() == t2.islands.size());
        for (std::size_t k = 0; k < t1.islands.size(); ++k) {
            CHECK(t1.islands[k].members == t2.islands[k].members);
            CHECK(t1.islands[k].parent == t2.islands[k].parent);
            CHECK(t1.islands[k].characteristic == t2.islands[k].characteristic);
        }
    }
}

TEST_CASE("property: tree matches brute-force sweep") {
    synth::Rng rng(31);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 1 + rng.below(12);
        const auto values = oracle::random_matrix(rng, n);
        std::vector<EntityId> members(n);
        std::iota(members.begin(), members.end(), EntityId{0});
        const auto tree = build_tree(dense(values));
        const auto brute = oracle::brute_sweep(values, members, 0.0, 0.05);
        REQUIRE(tree.levels.size() == brute.size());
        for (std::size_t t = 0; t < brute.size(); ++t) {
            CHECK(tree.levels[t] == brute[t].phi);
            CHECK(level_partition(tree, t) == brute[t].islands);
        }
    }
}
