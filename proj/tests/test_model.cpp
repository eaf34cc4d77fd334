#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "folknet/model.hpp"
#include "oracles.hpp"

using namespace folknet;

namespace {

TripartiteNetwork build(std::vector<TaggingEvent> events, BuildOptions opts = {}) {
    return build_network(events, opts).network;
}

/// (user, item, tag) names -> weight, for order-insensitive comparison.
std::map<std::tuple<std::string, std::string, std::string>, Rational> by_name(const TripartiteNetwork& net) {
    std::map<std::tuple<std::string, std::string, std::string>, Rational> out;
    for (const auto& l : net.links())
        out[{net.users().name(l.user), net.items().name(l.item), net.tags().name(l.tag)}] = l.weight;
    return out;
}

}  // namespace

TEST_CASE("registry assigns dense ids in first-seen order") {
    EntityRegistry reg(EntityKind::tag);
    CHECK(reg.intern("rock") == 0);
    CHECK(reg.intern("pop") == 1);
    CHECK(reg.intern("rock") == 0);
    CHECK(reg.size() == 2);
    CHECK(reg.name(1) == "pop");
    CHECK_FALSE(reg.find("jazz").has_value());
    CHECK_THROWS_AS(reg.require("jazz"), DataError);
}

TEST_CASE("two tags on one item give two links of weight one half") {
    const auto net = build({{"mu", "i1", {"I1", "I2"}}});
    const auto links = net.links();
    REQUIRE(links.size() == 2);
    for (const auto& l : links) CHECK(l.weight == Rational(1, 2));
}

TEST_CASE("a single tag gives a single link of weight one") {
    const auto net = build({{"mu", "i", {"I"}}});
    REQUIRE(net.links().size() == 1);
    CHECK(net.links()[0].weight == Rational(1));
}

TEST_CASE("repeated (user, item) events merge by tag union") {
    const auto net = build({{"mu", "i", {"I1"}}, {"mu", "i", {"I2"}}});
    REQUIRE(net.ownerships().size() == 1);
    const auto links = net.links();
    REQUIRE(links.size() == 2);
    Rational total;
    for (const auto& l : links) {
        CHECK(l.weight == Rational(1, 2));
        total += l.weight;
    }
    CHECK(total == Rational(1));
    // Re-adding an existing tag does not change the group.
    const auto again = build({{"mu", "i", {"I1"}}, {"mu", "i", {"I2", "I1"}}});
    CHECK(again.links().size() == 2);
}

TEST_CASE("weight lookup is zero off the link set") {
    const auto net = build({{"mu", "i", {"a", "b", "c"}}, {"la", "j", {"a"}}});
    const auto mu = net.users().require("mu");
    const auto i = net.items().require("i");
    const auto j = net.items().require("j");
    const auto a = net.tags().require("a");
    CHECK(net.weight(mu, i, a) == Rational(1, 3));
    CHECK(net.weight(mu, j, a) == Rational(0));
    CHECK(net.owns(mu, i));
    CHECK_FALSE(net.owns(mu, j));
}

TEST_CASE("tag normalization") {
    CHECK(normalize_tag("  Rock ", TagNormalization::trim_casefold) == "rock");
    CHECK(normalize_tag("  Rock ", TagNormalization::exact) == "  Rock ");
    CHECK(normalize_tag("\xC3\x89lectro", TagNormalization::trim_casefold) == "\xC3\x89lectro");

    const auto folded = build({{"mu", "i", {"Rock", "rock ", "ROCK"}}});
    CHECK(folded.tags().size() == 1);
    CHECK(folded.links()[0].weight == Rational(1));

    BuildOptions exact{TagNormalization::exact, false};
    CHECK(build({{"mu", "i", {"Rock", "rock"}}}, exact).tags().size() == 2);
}

TEST_CASE("events whose tags normalize away are rejected") {
    std::vector<TaggingEvent> events{{"mu", "i", {"  ", ""}}, {"mu", "j", {"x"}}};
    auto result = build_network(events);
    REQUIRE(result.diagnostics.size() == 1);
    CHECK(result.diagnostics[0].event_index == 0);
    CHECK(result.network.ownerships().size() == 1);
    CHECK(result.network.items().size() == 1);  // rejected item is not registered

    CHECK_THROWS_AS(build_network(events, {TagNormalization::trim_casefold, true}), DataError);
}

TEST_CASE("degree statistics") {
    SUBCASE("two users owning the same three items") {
        std::vector<TaggingEvent> events;
        for (const char* u : {"a", "b"})
            for (const char* i : {"x", "y", "z"}) events.push_back({u, i, {"t"}});
        const auto s = degree_stats(build(events));
        CHECK(s.items_per_user == doctest::Approx(3.0));
        CHECK(s.users_per_item == doctest::Approx(2.0));
        CHECK(s.tag_usage == std::vector<std::size_t>{6});
    }
    SUBCASE("empty network") {
        const auto s = degree_stats(build({}));
        CHECK(s.users == 0);
        CHECK(s.items_per_user == 0.0);
        CHECK(s.users_per_item == 0.0);
        CHECK(s.tag_usage.empty());
    }
    SUBCASE("one event with two tags") {
        const auto s = degree_stats(build({{"mu", "i", {"I1", "I2"}}}));
        CHECK(s.tag_usage == std::vector<std::size_t>{1, 1});
        CHECK(s.links == 2);
    }
}

TEST_CASE("property: weights of each owned pair sum to exactly one") {
    synth::Rng rng(42);
    for (int round = 0; round < 30; ++round) {
        const auto net = build(oracle::random_events(rng, 8, 40));
        std::map<std::pair<EntityId, EntityId>, Rational> sums;
        for (const auto& l : net.links()) sums[{l.user, l.item}] += l.weight;
        CHECK(sums.size() == net.ownerships().size());
        for (const auto& [key, total] : sums) CHECK(total == Rational(1));
    }
}

TEST_CASE("property: build is order-insensitive up to id assignment") {
    synth::Rng rng(7);
    for (int round = 0; round < 20; ++round) {
        auto events = oracle::random_events(rng, 6, 30);
        auto shuffled = events;
        for (std::size_t k = shuffled.size(); k > 1; --k) std::swap(shuffled[k - 1], shuffled[rng.below(k)]);
        CHECK(by_name(build(events)) == by_name(build(shuffled)));
    }
}
