#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "folknet/cli.hpp"
#include "folknet/io.hpp"
#include "folknet/synth.hpp"
#include "test_util.hpp"

using namespace folknet;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string field(const std::string& text, const std::string& key) {
    const auto pos = text.find(key + ": ");
    if (pos == std::string::npos) return {};
    const auto start = pos + key.size() + 2;
    return text.substr(start, text.find('\n', start) - start);
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"frobnicate"}).code == cli::kUsageError);
    CHECK(run({"stats"}).code == cli::kUsageError);  // --input is required
    CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("stats") {
    test::TempDir dir;
    SUBCASE("empty file prints zeros") {
        test::spit(dir.path / "empty.tsv", "");
        const auto r = run({"stats", "--input", (dir.path / "empty.tsv").string()});
        CHECK(r.code == 0);
        CHECK(field(r.out, "users") == "0");
        CHECK(field(r.out, "items_per_user") == "0");
    }
    SUBCASE("synthetic corpus matches generator bookkeeping") {
        synth::PlantedConfig cfg;
        const auto corpus = synth::generate(cfg);
        io::write_triples(corpus.events, dir.path / "c.tsv");
        const auto r = run({"stats", "--input", (dir.path / "c.tsv").string()});
        CHECK(r.code == 0);
        CHECK(field(r.out, "users") == std::to_string(cfg.communities * cfg.users_per_community));
        CHECK(field(r.out, "ownerships") == std::to_string(corpus.events.size()));
        CHECK(field(r.out, "items_per_user") == std::to_string(cfg.items_per_user));
    }
    SUBCASE("malformed file in strict mode") {
        test::spit(dir.path / "bad.tsv", "u1\ti1\trock\nu1\ti1\n");
        const auto r = run({"stats", "--input", (dir.path / "bad.tsv").string(), "--strict"});
        CHECK(r.code == cli::kDataError);
        CHECK(r.err.find("line 2") != std::string::npos);
        CHECK(run({"stats", "--input", (dir.path / "bad.tsv").string()}).code == 0);
    }
    SUBCASE("missing file") {
        CHECK(run({"stats", "--input", (dir.path / "nope.tsv").string()}).code == cli::kDataError);
    }
}

TEST_CASE("tree command") {
    test::TempDir dir;
    synth::PlantedConfig cfg;
    cfg.p_inter = 0.0;
    io::write_triples(synth::generate(cfg).events, dir.path / "c.tsv");
    const auto input = (dir.path / "c.tsv").string();

    auto tree_run = [&](const std::string& tag, std::vector<std::string> extra = {}) {
        std::vector<std::string> args{"tree", "--input", input, "--out-json", (dir.path / (tag + ".json")).string(),
                                      "--out-dot", (dir.path / (tag + ".dot")).string()};
        args.insert(args.end(), extra.begin(), extra.end());
        return run(args);
    };

    SUBCASE("planted communities appear as three islands") {
        REQUIRE(tree_run("a").code == 0);
        const auto doc = nlohmann::json::parse(test::slurp(dir.path / "a.json"));
        std::map<int, int> per_level;
        for (const auto& island : doc["islands"])
            if (!island["singleton"].get<bool>()) ++per_level[island["level"].get<int>()];
        CHECK(per_level[0] == 3);
        CHECK(doc["family"] == "tag");
    }
    SUBCASE("grid start is honored") {
        REQUIRE(tree_run("b", {"--phi-start", "0.1"}).code == 0);
        const auto doc = nlohmann::json::parse(test::slurp(dir.path / "b.json"));
        CHECK(doc["levels"][0] == 0.1);
        for (const auto& island : doc["islands"]) CHECK(island["phi"].get<double>() >= 0.1);
    }
    SUBCASE("reruns are byte-identical") {
        REQUIRE(tree_run("c").code == 0);
        REQUIRE(tree_run("d").code == 0);
        CHECK(test::slurp(dir.path / "c.json") == test::slurp(dir.path / "d.json"));
        CHECK(test::slurp(dir.path / "c.dot") == test::slurp(dir.path / "d.dot"));
    }
    SUBCASE("other families and matrix export") {
        const auto r = run({"tree", "--input", input, "--family", "items", "--view", "items-via-tags", "--top-n",
                            "30", "--out-matrix", (dir.path / "m.csv").string()});
        CHECK(r.code == 0);
        CHECK(io::read_matrix(dir.path / "m.csv").names.size() == 30);
    }
    SUBCASE("bad arguments") {
        CHECK(tree_run("e", {"--top-n", "1"}).code == cli::kUsageError);
        CHECK(tree_run("f", {"--family", "tags", "--view", "users-via-items"}).code == cli::kUsageError);
        CHECK(tree_run("g", {"--phi-start", "1.5"}).code == cli::kUsageError);
    }
}

TEST_CASE("diversity and compare") {
    test::TempDir dir;
    // u_single uses one tag; u_a and u_b are identical; u_c is disjoint.
    test::spit(dir.path / "c.tsv",
               "user\titem\ttag\n"
               "u_single\tx\trock\n"
               "u_a\tx\trock\nu_a\tx\tmetal\nu_a\ty\tjazz\n"
               "u_b\tx\trock\nu_b\tx\tmetal\nu_b\ty\tjazz\n"
               "u_c\tz\tfolk\nu_c\tw\tblues\n");
    const auto input = (dir.path / "c.tsv").string();

    const auto single = run({"diversity", "--input", input, "u_single"});
    CHECK(single.code == 0);
    CHECK(field(single.out, "diversity") == "0");
    CHECK(field(single.out, "entropy") == "0");

    const auto undefined = run({"compare", "--input", input, "u_single", "u_a"});
    CHECK(undefined.code == 0);
    CHECK(field(undefined.out, "distance") == "undefined");

    const auto same = run({"compare", "--input", input, "u_a", "u_b"});
    CHECK(field(same.out, "cosine") == "1");
    CHECK(field(same.out, "distance") == "1");

    const auto apart = run({"compare", "--input", input, "u_a", "u_c"});
    CHECK(field(apart.out, "cosine") == "0");
    const auto swapped = run({"compare", "--input", input, "u_c", "u_a"});
    CHECK(apart.out == swapped.out);

    const auto unknown = run({"diversity", "--input", input, "nobody"});
    CHECK(unknown.code == cli::kDataError);
    CHECK(unknown.err.find("nobody") != std::string::npos);
}

TEST_CASE("diversity of the only user colors every island at r = 1") {
    test::TempDir dir;
    test::spit(dir.path / "c.tsv", "u\tx\trock\nu\tx\tmetal\nu\ty\tjazz\nu\tz\tjazz\nu\tz\tbebop\n");
    const auto r = run({"diversity", "--input", (dir.path / "c.tsv").string(), "u", "--out-json",
                        (dir.path / "t.json").string(), "--out-dot", (dir.path / "t.dot").string()});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(test::slurp(dir.path / "t.json"));
    for (const auto& island : doc["islands"]) {
        CHECK(island["r"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(island["color"] == nlohmann::json::array({0, 100, 110}));
    }
    CHECK(test::slurp(dir.path / "t.dot").find("#00646e") != std::string::npos);
}

TEST_CASE("synth command") {
    test::TempDir dir;
    test::spit(dir.path / "cfg.txt", "communities = 2\nusers_per_community = 4\n");
    const auto a = run({"synth", "--config", (dir.path / "cfg.txt").string(), "--seed", "5"});
    const auto b = run({"synth", "--config", (dir.path / "cfg.txt").string(), "--seed", "5", "--output",
                        (dir.path / "out.tsv").string(), "--truth", (dir.path / "truth.tsv").string()});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == test::slurp(dir.path / "out.tsv"));
    CHECK(a.out.rfind("user\titem\ttag\n", 0) == 0);
    CHECK(test::slurp(dir.path / "truth.tsv").find("c1_tag19\t1\n") != std::string::npos);
    CHECK(run({"synth", "--set", "communities = 0"}).code == cli::kUsageError);
    CHECK(run({"synth", "--config", (dir.path / "none.txt").string()}).code == cli::kDataError);
}
