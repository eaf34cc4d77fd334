#include "folknet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "folknet/diversity.hpp"
#include "folknet/io.hpp"
#include "folknet/percolation.hpp"
#include "folknet/projection.hpp"
#include "folknet/synth.hpp"

namespace folknet::cli {

namespace {

struct InputOptions {
    std::string input;
    std::string format = "tsv";
    std::string normalize = "trim-casefold";
    bool strict = false;
    bool binary_tag_items = false;
    unsigned threads = 1;
};

struct TreeOptions {
    std::string family = "tags";
    std::string view;
    std::size_t top_n = 0;  // 0: family default
    double phi_start = 0.0;
    double phi_step = 0.05;
    std::string out_json;
    std::string out_dot;
    std::string out_matrix;
    bool include_singletons = false;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void add_input_options(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.input, "Triples file (user, item, tag per line)")->required();
    cmd->add_option("--format", in.format, "tsv or csv")->capture_default_str();
    cmd->add_option("--normalize-tags", in.normalize, "trim-casefold or exact")->capture_default_str();
    cmd->add_flag("--strict", in.strict, "Abort on the first malformed record");
    cmd->add_flag("--binary-tag-items", in.binary_tag_items, "Binary tag-item attribution in tag correlations");
    cmd->add_option("--threads", in.threads, "Worker threads for matrix assembly")->capture_default_str();
}

void add_grid_options(CLI::App* cmd, TreeOptions& tree) {
    cmd->add_option("--top-n", tree.top_n, "Number of most used entities (default 120 tags, 1000 items/users)");
    cmd->add_option("--phi-start", tree.phi_start, "First filter level")->capture_default_str();
    cmd->add_option("--phi-step", tree.phi_step, "Filter increment")->capture_default_str();
    cmd->add_option("--out-json", tree.out_json, "Write the island tree as JSON");
    cmd->add_option("--out-dot", tree.out_dot, "Write the island tree as Graphviz DOT");
    cmd->add_flag("--include-singletons", tree.include_singletons, "Draw single-member islands in DOT output");
}

TripartiteNetwork load(const InputOptions& in, std::ostream& err) {
    const auto read = io::read_triples(in.input, io::parse_format(in.format), in.strict);
    for (const auto& w : read.warnings) err << "warning: line " << w.line << ": " << w.message << "\n";
    BuildOptions opts;
    opts.normalization = parse_tag_normalization(in.normalize);
    opts.strict = in.strict;
    auto built = build_network(read.events, opts);
    for (const auto& d : built.diagnostics) err << "warning: " << d.message << "\n";
    return std::move(built.network);
}

CorrelationOptions correlation_options(const InputOptions& in) {
    CorrelationOptions o;
    o.tag_weighting = in.binary_tag_items ? TagItemWeighting::binary : TagItemWeighting::summed;
    o.threads = std::max(1u, in.threads);
    return o;
}

std::size_t default_top_n(EntityKind family) { return family == EntityKind::tag ? 120 : 1000; }

struct BuiltTree {
    CorrelationMatrix matrix;
    IslandTree tree;
};

BuiltTree build_family_tree(const TripartiteNetwork& net, EntityKind family, View view, const TreeOptions& t,
                            const InputOptions& in) {
    const std::size_t n = t.top_n == 0 ? default_top_n(family) : t.top_n;
    if (n < 2) throw std::invalid_argument("--top-n must be at least 2");
    auto members = top_n(net, family, n);
    if (members.size() < 2)
        throw DataError("need at least two " + std::string(to_string(family)) + "s to build a tree");
    auto matrix = correlation_matrix(net, view, std::move(members), correlation_options(in));
    auto tree = build_tree(matrix, FilterGrid{t.phi_start, t.phi_step});
    return {std::move(matrix), std::move(tree)};
}

/// Spectrum-restricted sine matrix over the given tags.
SineMatrix sine_over(const TripartiteNetwork& net, const std::set<EntityId>& tags, const InputOptions& in) {
    auto c = correlation_matrix(net, View::tags_via_items, std::vector<EntityId>(tags.begin(), tags.end()),
                                correlation_options(in));
    return SineMatrix(c);
}

void add_tags(const TagSpectrum& s, std::set<EntityId>& tags) {
    for (const auto& [tag, count] : s.counts) tags.insert(tag);
}

int cmd_stats(const InputOptions& in, std::ostream& out, std::ostream& err) {
    const auto net = load(in, err);
    const auto s = degree_stats(net);
    out << "users: " << s.users << "\n"
        << "items: " << s.items << "\n"
        << "tags: " << s.tags << "\n"
        << "ownerships: " << s.ownerships << "\n"
        << "links: " << s.links << "\n"
        << "items_per_user: " << num(s.items_per_user) << "\n"
        << "users_per_item: " << num(s.users_per_item) << "\n";
    return kSuccess;
}

int cmd_tree(const InputOptions& in, const TreeOptions& t, std::ostream& out, std::ostream& err) {
    const EntityKind family = parse_entity_kind(t.family);
    const View view = t.view.empty() ? default_view(family) : parse_view(t.view);
    if (view_family(view) != family)
        throw std::invalid_argument("view " + std::string(to_string(view)) + " does not describe " + t.family);
    const auto net = load(in, err);
    const auto built = build_family_tree(net, family, view, t, in);
    const auto& names = net.registry(family);

    if (!t.out_matrix.empty()) io::write_matrix(built.matrix, names, t.out_matrix);
    if (!t.out_json.empty()) io::write_tree_json(built.tree, names, nullptr, t.out_json);
    if (!t.out_dot.empty())
        io::write_tree_dot(built.tree, names, nullptr, t.out_dot, io::DotOptions{t.include_singletons});
    if (t.out_json.empty() && t.out_dot.empty() && t.out_matrix.empty()) {
        out << io::tree_json(built.tree, names);
        return kSuccess;
    }

    std::size_t displayed = 0;
    for (std::size_t k = 1; k < built.tree.islands.size(); ++k) displayed += built.tree.islands[k].singleton() ? 0 : 1;
    out << "members: " << built.matrix.size() << "\n"
        << "levels: " << built.tree.levels.size() << "\n"
        << "islands: " << built.tree.islands.size() - 1 << "\n"
        << "non_singleton_islands: " << displayed << "\n";
    return kSuccess;
}

int cmd_diversity(const InputOptions& in, const TreeOptions& t, const std::string& user_name, bool weighted,
                  std::ostream& out, std::ostream& err) {
    const auto net = load(in, err);
    const EntityId user = net.users().require(user_name);
    const TauCounting counting = weighted ? TauCounting::weighted : TauCounting::attributions;
    const auto spectrum = tag_spectrum(net, user, counting);

    std::set<EntityId> tags;
    add_tags(spectrum, tags);
    const auto s = sine_over(net, tags, in);
    out << "user: " << user_name << "\n"
        << "tags: " << spectrum.counts.size() << "\n"
        << "entropy: " << num(entropy(spectrum)) << "\n"
        << "diversity: " << num(diversity(spectrum, s)) << "\n";

    if (!t.out_dot.empty() || !t.out_json.empty()) {
        const auto built = build_family_tree(net, EntityKind::tag, View::tags_via_items, t, in);
        const auto sample = sample_spectrum(net, counting);
        const auto report = island_activity(built.tree, spectrum, sample);
        if (!t.out_json.empty()) io::write_tree_json(built.tree, net.tags(), &report, t.out_json);
        if (!t.out_dot.empty())
            io::write_tree_dot(built.tree, net.tags(), &report, t.out_dot, io::DotOptions{t.include_singletons});
    }
    return kSuccess;
}

int cmd_compare(const InputOptions& in, const std::string& name1, const std::string& name2, bool weighted,
                std::ostream& out, std::ostream& err) {
    const auto net = load(in, err);
    const EntityId u1 = net.users().require(name1);
    const EntityId u2 = net.users().require(name2);
    out << "cosine: " << num(cosine(user_item_signature(net, u1), user_item_signature(net, u2))) << "\n";

    const TauCounting counting = weighted ? TauCounting::weighted : TauCounting::attributions;
    const auto s1 = tag_spectrum(net, u1, counting);
    const auto s2 = tag_spectrum(net, u2, counting);
    std::set<EntityId> tags;
    add_tags(s1, tags);
    add_tags(s2, tags);
    const auto s = sine_over(net, tags, in);
    const double d1 = diversity(s1, s);
    const double d2 = diversity(s2, s);
    if (d1 <= 0.0 || d2 <= 0.0) {
        out << "distance: undefined\n";
        err << "note: distance undefined because a user has zero diversity\n";
    } else {
        out << "distance: " << num(pairwise_distance(s1, s2, s)) << "\n";
    }
    return kSuccess;
}

int cmd_synth(const std::string& config_path, const std::vector<std::string>& overrides, std::ostream& out,
              const std::string& output, const std::string& truth, const std::string& format) {
    std::string text;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw DataError("cannot read '" + config_path + "'");
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    for (const auto& kv : overrides) text += "\n" + kv;
    const auto config = synth::parse_config(text);
    const auto corpus = synth::generate(config);
    const auto fmt = io::parse_format(format);
    if (output.empty())
        io::write_triples(corpus.events, out, fmt);
    else
        io::write_triples(corpus.events, std::filesystem::path(output), fmt);
    if (!truth.empty()) {
        std::ofstream t(truth, std::ios::binary | std::ios::trunc);
        if (!t) throw DataError("cannot write '" + truth + "'");
        t << "tag\tcommunity\n";
        for (const auto& [tag, community] : corpus.tag_community) t << tag << '\t' << community << '\n';
    }
    return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tripartite folksonomy analysis: projections, percolation trees, diversity"};
    app.name("folknet");
    app.require_subcommand(1);

    InputOptions in;
    TreeOptions tree;
    std::string user, user2;
    bool weighted = false;

    auto* stats = app.add_subcommand("stats", "Print network size and degree means");
    add_input_options(stats, in);

    auto* tree_cmd = app.add_subcommand("tree", "Build and export the percolation island tree");
    add_input_options(tree_cmd, in);
    add_grid_options(tree_cmd, tree);
    tree_cmd->add_option("--family", tree.family, "users, items or tags")->capture_default_str();
    tree_cmd->add_option("--view", tree.view,
                         "users-via-items, items-via-users, items-via-tags or tags-via-items");
    tree_cmd->add_option("--out-matrix", tree.out_matrix, "Write the correlation matrix as CSV");

    auto* div = app.add_subcommand("diversity", "Entropy, diversity and activity-colored tag tree of a user");
    add_input_options(div, in);
    add_grid_options(div, tree);
    div->add_option("user", user, "User name")->required();
    div->add_flag("--weighted-tau", weighted, "Count tags by link weight instead of attributions");

    auto* cmp = app.add_subcommand("compare", "Cosine similarity and normalized distance of two users");
    add_input_options(cmp, in);
    cmp->add_option("user1", user, "First user")->required();
    cmp->add_option("user2", user2, "Second user")->required();
    cmp->add_flag("--weighted-tau", weighted, "Count tags by link weight instead of attributions");

    std::string config_path, output, truth, format = "tsv";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    auto* syn = app.add_subcommand("synth", "Generate a planted-community corpus");
    syn->add_option("--config", config_path, "key = value configuration file");
    auto* seed_opt = syn->add_option("--seed", seed, "Override the configured seed");
    syn->add_option("--set", overrides, "Extra key=value settings");
    syn->add_option("--output", output, "Triples output path (default stdout)");
    syn->add_option("--truth", truth, "Write tag -> community assignments");
    syn->add_option("--format", format, "tsv or csv")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (stats->parsed()) return cmd_stats(in, out, err);
        if (tree_cmd->parsed()) return cmd_tree(in, tree, out, err);
        if (div->parsed()) return cmd_diversity(in, tree, user, weighted, out, err);
        if (cmp->parsed()) return cmd_compare(in, user, user2, weighted, out, err);
        if (syn->parsed()) {
            if (seed_opt->count() > 0) overrides.push_back("seed = " + std::to_string(seed));
            return cmd_synth(config_path, overrides, out, output, truth, format);
        }
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    }
    return kUsageError;
}

}  // namespace folknet::cli
