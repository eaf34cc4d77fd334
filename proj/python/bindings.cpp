#include <memory>
#include <set>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "folknet/diversity.hpp"
#include "folknet/io.hpp"
#include "folknet/percolation.hpp"
#include "folknet/synth.hpp"

namespace py = pybind11;
using namespace folknet;

namespace {

using NetPtr = std::shared_ptr<const TripartiteNetwork>;

struct PyNetwork {
    NetPtr net;
};

struct PyMatrix {
    NetPtr net;
    CorrelationMatrix matrix;

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        const auto& reg = net->registry(matrix.family());
        for (auto id : matrix.members()) out.push_back(reg.name(id));
        return out;
    }
};

struct PyTree {
    NetPtr net;
    IslandTree tree;

    const EntityRegistry& names() const { return net->registry(tree.family); }
};

PyNetwork from_events(const std::vector<TaggingEvent>& events, const std::string& normalize, bool strict) {
    BuildOptions opts{parse_tag_normalization(normalize), strict};
    return {std::make_shared<const TripartiteNetwork>(build_network(events, opts).network)};
}

/// Accepts (user, item, tag) or (user, item, [tags]) tuples.
std::vector<TaggingEvent> to_events(const py::iterable& rows) {
    std::vector<TaggingEvent> events;
    for (const auto& row : rows) {
        const auto t = row.cast<py::sequence>();
        if (py::len(t) != 3) throw std::invalid_argument("expected (user, item, tag) rows");
        TaggingEvent ev{t[0].cast<std::string>(), t[1].cast<std::string>(), {}};
        if (py::isinstance<py::str>(t[2]))
            ev.tags.push_back(t[2].cast<std::string>());
        else
            ev.tags = t[2].cast<std::vector<std::string>>();
        events.push_back(std::move(ev));
    }
    return events;
}

py::dict spectrum_dict(const TripartiteNetwork& net, const TagSpectrum& s) {
    py::dict out;
    for (const auto& [tag, count] : s.counts) out[py::str(net.tags().name(tag))] = count;
    return out;
}

TauCounting counting(bool weighted) { return weighted ? TauCounting::weighted : TauCounting::attributions; }

SineMatrix sine_over(const TripartiteNetwork& net, const std::set<EntityId>& tags) {
    return SineMatrix(correlation_matrix(net, View::tags_via_items, std::vector<EntityId>(tags.begin(), tags.end())));
}

py::dict island_dict(const PyTree& t, const Island& island) {
    py::dict d;
    std::vector<std::string> members;
    for (auto m : island.members) members.push_back(t.names().name(m));
    d["id"] = island.id;
    d["level"] = island.level;
    d["phi"] = island.id == Island::kRoot ? py::object(py::none()) : py::object(py::float_(island.phi));
    d["members"] = members;
    d["parent"] = island.id == Island::kRoot ? py::object(py::none()) : py::object(py::int_(island.parent));
    d["characteristic"] = t.names().name(island.characteristic);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Tag correlation trees and user diversity for folksonomy data";
    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);

    py::class_<PyNetwork>(m, "Network")
        .def_property_readonly("users",
                               [](const PyNetwork& n) {
                                   auto s = n.net->users().names();
                                   return std::vector<std::string>(s.begin(), s.end());
                               })
        .def_property_readonly("items",
                               [](const PyNetwork& n) {
                                   auto s = n.net->items().names();
                                   return std::vector<std::string>(s.begin(), s.end());
                               })
        .def_property_readonly("tags",
                               [](const PyNetwork& n) {
                                   auto s = n.net->tags().names();
                                   return std::vector<std::string>(s.begin(), s.end());
                               })
        .def("stats",
             [](const PyNetwork& n) {
                 const auto s = degree_stats(*n.net);
                 py::dict d;
                 d["users"] = s.users;
                 d["items"] = s.items;
                 d["tags"] = s.tags;
                 d["ownerships"] = s.ownerships;
                 d["links"] = s.links;
                 d["items_per_user"] = s.items_per_user;
                 d["users_per_item"] = s.users_per_item;
                 return d;
             })
        .def(
            "weight",
            [](const PyNetwork& n, const std::string& user, const std::string& item, const std::string& tag) {
                const auto w = n.net->weight(n.net->users().require(user), n.net->items().require(item),
                                             n.net->tags().require(tag));
                return py::make_tuple(w.numerator(), w.denominator());
            },
            py::arg("user"), py::arg("item"), py::arg("tag"), "Link weight as a (numerator, denominator) pair.")
        .def(
            "cosine",
            [](const PyNetwork& n, const std::string& view, const std::string& a, const std::string& b) {
                const auto v = parse_view(view);
                const auto& reg = n.net->registry(view_family(v));
                return cosine(signature(*n.net, v, reg.require(a)), signature(*n.net, v, reg.require(b)));
            },
            py::arg("view"), py::arg("a"), py::arg("b"))
        .def(
            "correlation",
            [](const PyNetwork& n, const std::string& family, std::optional<std::string> view, std::size_t top,
               bool binary_tag_items, unsigned threads) {
                const auto fam = parse_entity_kind(family);
                const auto v = view ? parse_view(*view) : default_view(fam);
                if (view_family(v) != fam) throw std::invalid_argument("view does not match family");
                std::optional<std::vector<EntityId>> members;
                if (top > 0) members = top_n(*n.net, fam, top);
                CorrelationOptions opts;
                opts.tag_weighting = binary_tag_items ? TagItemWeighting::binary : TagItemWeighting::summed;
                opts.threads = threads;
                return PyMatrix{n.net, correlation_matrix(*n.net, v, std::move(members), opts)};
            },
            py::arg("family") = "tags", py::arg("view") = py::none(), py::arg("top_n") = 0,
            py::arg("binary_tag_items") = false, py::arg("threads") = 1,
            "Correlation matrix of one family; top_n = 0 keeps every member.")
        .def(
            "tag_spectrum",
            [](const PyNetwork& n, std::optional<std::string> user, bool weighted) {
                const auto s = user ? tag_spectrum(*n.net, n.net->users().require(*user), counting(weighted))
                                    : sample_spectrum(*n.net, counting(weighted));
                return spectrum_dict(*n.net, s);
            },
            py::arg("user") = py::none(), py::arg("weighted") = false)
        .def(
            "entropy",
            [](const PyNetwork& n, const std::string& user, bool weighted) {
                return entropy(tag_spectrum(*n.net, n.net->users().require(user), counting(weighted)));
            },
            py::arg("user"), py::arg("weighted") = false)
        .def(
            "diversity",
            [](const PyNetwork& n, const std::string& user, bool weighted) {
                const auto s = tag_spectrum(*n.net, n.net->users().require(user), counting(weighted));
                std::set<EntityId> tags;
                for (const auto& [tag, c] : s.counts) tags.insert(tag);
                return diversity(s, sine_over(*n.net, tags));
            },
            py::arg("user"), py::arg("weighted") = false)
        .def(
            "pairwise_distance",
            [](const PyNetwork& n, const std::string& a, const std::string& b, bool weighted) {
                const auto sa = tag_spectrum(*n.net, n.net->users().require(a), counting(weighted));
                const auto sb = tag_spectrum(*n.net, n.net->users().require(b), counting(weighted));
                std::set<EntityId> tags;
                for (const auto& [tag, c] : sa.counts) tags.insert(tag);
                for (const auto& [tag, c] : sb.counts) tags.insert(tag);
                return pairwise_distance(sa, sb, sine_over(*n.net, tags));
            },
            py::arg("a"), py::arg("b"), py::arg("weighted") = false)
        .def(
            "activity",
            [](const PyNetwork& n, const PyTree& t, const std::string& user, bool weighted) {
                const auto report =
                    island_activity(t.tree, tag_spectrum(*n.net, n.net->users().require(user), counting(weighted)),
                                    sample_spectrum(*n.net, counting(weighted)));
                py::list out;
                for (const auto& rec : report.records) {
                    py::dict d;
                    d["island"] = rec.island;
                    d["p_sample"] = rec.p_sample;
                    d["p_user"] = rec.p_user;
                    d["r"] = rec.ratio ? py::object(py::float_(*rec.ratio)) : py::object(py::none());
                    d["color"] = py::make_tuple(rec.color.r, rec.color.g, rec.color.b);
                    out.append(d);
                }
                return out;
            },
            py::arg("tree"), py::arg("user"), py::arg("weighted") = false,
            "Per-island activity records, indexed by island id.");

    py::class_<PyMatrix>(m, "CorrelationMatrix")
        .def_property_readonly("names", &PyMatrix::names)
        .def_property_readonly("view", [](const PyMatrix& p) { return std::string(to_string(p.matrix.view())); })
        .def("__len__", [](const PyMatrix& p) { return p.matrix.size(); })
        .def("__getitem__",
             [](const PyMatrix& p, std::pair<std::size_t, std::size_t> ab) {
                 if (ab.first >= p.matrix.size() || ab.second >= p.matrix.size()) throw py::index_error();
                 return p.matrix(ab.first, ab.second);
             })
        .def("to_list",
             [](const PyMatrix& p) {
                 const auto n = p.matrix.size();
                 const auto flat = p.matrix.to_dense();
                 std::vector<std::vector<double>> rows(n);
                 for (std::size_t a = 0; a < n; ++a) rows[a].assign(flat.begin() + a * n, flat.begin() + (a + 1) * n);
                 return rows;
             })
        .def("to_csv", [](const PyMatrix& p) { return io::matrix_csv(p.matrix, p.net->registry(p.matrix.family())); });

    py::class_<PyTree>(m, "IslandTree")
        .def_property_readonly("levels", [](const PyTree& t) { return t.tree.levels; })
        .def_property_readonly("islands",
                               [](const PyTree& t) {
                                   py::list out;
                                   for (const auto& island : t.tree.islands) out.append(island_dict(t, island));
                                   return out;
                               })
        .def(
            "level",
            [](const PyTree& t, std::size_t level) {
                if (level >= t.tree.levels.size()) throw py::index_error();
                py::list out;
                for (const auto& island : t.tree.level_islands(level)) out.append(island_dict(t, island));
                return out;
            },
            py::arg("level"))
        .def("to_json", [](const PyTree& t) { return io::tree_json(t.tree, t.names()); })
        .def(
            "to_dot",
            [](const PyTree& t, bool include_singletons) {
                io::DotOptions opts;
                opts.include_singletons = include_singletons;
                return io::tree_dot(t.tree, t.names(), nullptr, opts);
            },
            py::arg("include_singletons") = false);

    m.def(
        "read_triples",
        [](const std::filesystem::path& path, const std::string& format, bool strict) {
            const auto r = io::read_triples(path, io::parse_format(format), strict);
            py::list rows;
            for (const auto& e : r.events) rows.append(py::make_tuple(e.user, e.item, e.tags));
            py::list warnings;
            for (const auto& w : r.warnings) warnings.append(py::make_tuple(w.line, w.message));
            return py::make_tuple(rows, warnings);
        },
        py::arg("path"), py::arg("format") = "tsv", py::arg("strict") = false,
        "Returns ([(user, item, [tags])], [(line, warning)]).");
    m.def(
        "read_network",
        [](const std::filesystem::path& path, const std::string& format, bool strict, const std::string& normalize) {
            return from_events(io::read_triples(path, io::parse_format(format), strict).events, normalize, strict);
        },
        py::arg("path"), py::arg("format") = "tsv", py::arg("strict") = false,
        py::arg("normalize") = "trim-casefold");
    m.def(
        "build_network",
        [](const py::iterable& rows, const std::string& normalize, bool strict) {
            return from_events(to_events(rows), normalize, strict);
        },
        py::arg("rows"), py::arg("normalize") = "trim-casefold", py::arg("strict") = false);
    m.def(
        "build_tree",
        [](const PyMatrix& p, double phi_start, double phi_step) {
            return PyTree{p.net, build_tree(p.matrix, FilterGrid{phi_start, phi_step})};
        },
        py::arg("matrix"), py::arg("phi_start") = 0.0, py::arg("phi_step") = 0.05);
    m.def(
        "entropy",
        [](const std::vector<double>& counts) {
            std::map<EntityId, double> c;
            for (std::size_t k = 0; k < counts.size(); ++k)
                if (counts[k] != 0) c[static_cast<EntityId>(k)] = counts[k];
            return entropy(TagSpectrum::from_counts(c));
        },
        py::arg("counts"), "Shannon entropy (natural log) of a list of counts.");
    m.def(
        "activity_color",
        [](std::optional<double> r) {
            const auto c = activity_color(r);
            return py::make_tuple(c.r, c.g, c.b);
        },
        py::arg("r"), "Green-to-blue RGB for an activity ratio; None gives gray.");
    m.def("rand_index", &synth::rand_index, py::arg("a"), py::arg("b"));
    m.def(
        "generate_planted",
        [](int communities, int tags_per_community, int users_per_community, int items_per_community,
           int items_per_user, double p_intra, double p_inter, std::uint64_t seed) {
            synth::PlantedConfig cfg{communities,    tags_per_community, users_per_community, items_per_community,
                                     items_per_user, p_intra,            p_inter,             seed};
            const auto corpus = synth::generate(cfg);
            py::list rows;
            for (const auto& e : corpus.events)
                for (const auto& t : e.tags) rows.append(py::make_tuple(e.user, e.item, t));
            return py::make_tuple(rows, corpus.tag_community);
        },
        py::arg("communities") = 3, py::arg("tags_per_community") = 20, py::arg("users_per_community") = 30,
        py::arg("items_per_community") = 40, py::arg("items_per_user") = 10, py::arg("p_intra") = 0.9,
        py::arg("p_inter") = 0.05, py::arg("seed") = 1,
        "Planted-partition corpus as ([(user, item, tag)], {tag: community}).");
}
