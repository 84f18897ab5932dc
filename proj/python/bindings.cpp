#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "twoway/analysis.hpp"
#include "twoway/community.hpp"
#include "twoway/evaluation.hpp"
#include "twoway/io.hpp"
#include "twoway/metapath.hpp"
#include "twoway/serialize.hpp"
#include "twoway/synthgen.hpp"

namespace py = pybind11;
using namespace twoway;

namespace {

using EdgeTuple = std::tuple<NodeId, NodeId, int>;

Layer layer_arg(const std::string& name) { return parse_layer(name); }

std::vector<EdgeTuple> edge_tuples(const MultilayerNetwork& net, const std::string& layer) {
    std::vector<EdgeTuple> out;
    for (const auto& e : net.edges(layer_arg(layer))) {
        out.emplace_back(e.src, e.dst, e.sign ? to_int(*e.sign) : static_cast<int>(e.weight));
    }
    return out;
}

// F edges as (src, dst, sign); M and R as (src, dst) or (src, dst, weight).
MultilayerNetwork from_lists(std::size_t node_count, const std::vector<py::tuple>& f,
                             const std::vector<py::tuple>& m, const std::vector<py::tuple>& r) {
    LayerEdges edges;
    for (const auto& t : f) {
        const int s = t[2].cast<int>();
        if (s != 1 && s != -1) throw DomainError("netcore", "F sign must be +1 or -1");
        edges[Layer::F].push_back({t[0].cast<NodeId>(), t[1].cast<NodeId>(), Layer::F,
                                   s > 0 ? Sign::Positive : Sign::Negative, 1});
    }
    const auto add = [&](Layer layer, const std::vector<py::tuple>& list) {
        for (const auto& t : list) {
            const auto w = t.size() > 2 ? t[2].cast<std::uint32_t>() : 1u;
            edges[layer].push_back({t[0].cast<NodeId>(), t[1].cast<NodeId>(), layer, std::nullopt, w});
        }
    };
    add(Layer::M, m);
    add(Layer::R, r);
    return build_network(edges, node_count);
}

// Network plus the partitions it was augmented with, so the augmented view
// never outlives its base.
struct Clustered {
    std::shared_ptr<const MultilayerNetwork> net;
    AugmentedNetwork aug;
};

Clustered clustered(const std::shared_ptr<MultilayerNetwork>& net, const std::vector<ClusterId>& r,
                    const std::vector<ClusterId>& m) {
    const auto to_part = [&](Layer layer, const std::vector<ClusterId>& labels) {
        if (labels.empty()) return cluster_layer(*net, layer, 0.15, 0);
        return Partition::from_labels(layer, labels);
    };
    return Clustered{net, AugmentedNetwork(*net, to_part(Layer::R, r), to_part(Layer::M, m))};
}

std::string to_json_text(const Json& j) { return j.dump(); }

}  // namespace

PYBIND11_MODULE(_twoway, mod) {
    mod.doc() = "Sign prediction for two-way relations in multilayer networks";
    mod.attr("__version__") = toolkit_version();
    mod.attr("FORMAT_VERSION") = kFormatVersion;

    py::register_exception<Error>(mod, "TwowayError", PyExc_RuntimeError);

    py::class_<MultilayerNetwork, std::shared_ptr<MultilayerNetwork>>(mod, "Network")
        .def(py::init(&from_lists), py::arg("node_count"), py::arg("f") = std::vector<py::tuple>{},
             py::arg("m") = std::vector<py::tuple>{}, py::arg("r") = std::vector<py::tuple>{})
        .def_property_readonly("node_count", &MultilayerNetwork::node_count)
        .def("edge_count", [](const MultilayerNetwork& n, const std::string& l) { return n.edge_count(layer_arg(l)); })
        .def("edges", &edge_tuples, py::arg("layer"),
             "(src, dst, sign) for F, (src, dst, weight) for M and R")
        .def("f_sign", [](const MultilayerNetwork& n, NodeId a, NodeId b) -> std::optional<int> {
            const auto s = n.f_sign(a, b);
            if (!s) return std::nullopt;
            return to_int(*s);
        })
        .def("embeddedness", [](const MultilayerNetwork& n, NodeId a, NodeId b) { return embeddedness(n, a, b); });

    mod.def(
        "load_dataset",
        [](const std::string& manifest) { return std::make_shared<MultilayerNetwork>(load_dataset(manifest).network); },
        py::arg("manifest"));

    mod.def(
        "generate",
        [](const std::string& preset_name, const std::optional<std::string>& config_json,
           std::optional<std::uint64_t> seed) {
            GenConfig cfg = config_json ? gen_config_from_json(Json::parse(*config_json)) : preset(preset_name);
            if (seed) cfg.seed = *seed;
            auto s = generate(cfg);
            return py::make_tuple(std::make_shared<MultilayerNetwork>(std::move(s.network)),
                                  to_json_text(to_json(s.truth)), to_json_text(to_json(cfg)));
        },
        py::arg("preset") = "desk", py::arg("config_json") = std::nullopt, py::arg("seed") = std::nullopt);

    mod.def(
        "cluster",
        [](const MultilayerNetwork& net, const std::string& layer, double teleport, std::uint64_t seed) {
            InfomapOptions o;
            o.teleport = teleport;
            o.seed = seed;
            const auto res = run_infomap(net, layer_arg(layer), o);
            py::dict d;
            d["assignment"] = res.partition.assignment;
            d["cluster_count"] = res.partition.cluster_count;
            d["initial_codelength"] = res.initial_codelength;
            d["codelength"] = res.final_codelength;
            d["trace"] = res.trace;
            return d;
        },
        py::arg("network"), py::arg("layer"), py::arg("teleport") = 0.15, py::arg("seed") = 0);

    mod.def(
        "map_equation",
        [](const MultilayerNetwork& net, const std::string& layer, const std::vector<ClusterId>& assignment,
           double teleport) {
            const auto g = layer_digraph(net, layer_arg(layer));
            return map_equation(g, visit_rates(g, teleport), assignment);
        },
        py::arg("network"), py::arg("layer"), py::arg("assignment"), py::arg("teleport") = 0.15);

    mod.def("feature_columns", [](const std::string& mode) { return feature_columns(parse_feature_mode(mode)); },
            py::arg("mode") = "both");

    mod.def(
        "featurize",
        [](const std::shared_ptr<MultilayerNetwork>& net, const std::vector<std::pair<NodeId, NodeId>>& pairs,
           const std::string& mode, const std::vector<ClusterId>& partition_r,
           const std::vector<ClusterId>& partition_m) {
            const auto c = clustered(net, partition_r, partition_m);
            PathCounter counter(c.aug);
            const MaskedView view(*net);
            std::vector<std::vector<std::uint64_t>> rows;
            for (auto [u, v] : pairs) rows.push_back(counter.row(view.hiding(u, v), u, v, parse_feature_mode(mode)).counts);
            return rows;
        },
        py::arg("network"), py::arg("pairs"), py::arg("mode") = "both",
        py::arg("partition_r") = std::vector<ClusterId>{}, py::arg("partition_m") = std::vector<ClusterId>{},
        "Counts with each pair's own F edge hidden. Empty partitions are clustered with seed 0.");

    mod.def(
        "evaluate",
        [](const std::shared_ptr<MultilayerNetwork>& net, const std::string& predictors, std::size_t k,
           std::uint64_t seed, std::size_t threads, bool class_weighted, const std::vector<ClusterId>& partition_r,
           const std::vector<ClusterId>& partition_m) {
            const auto c = clustered(net, partition_r, partition_m);
            const auto plan = kfold_split(net->edges(Layer::F), k, seed);
            ExperimentConfig cfg;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.svm.class_weighted = class_weighted;
            Json out = Json::array();
            {
                py::gil_scoped_release release;
                for (auto kind : parse_predictor_list(predictors)) out.push_back(to_json(run_experiment(c.aug, kind, plan, cfg)));
            }
            return to_json_text(out);
        },
        py::arg("network"), py::arg("predictors") = "cbmp,nbmp,nbsp,mf,random", py::arg("k") = 10,
        py::arg("seed") = 0, py::arg("threads") = 1, py::arg("class_weighted") = true,
        py::arg("partition_r") = std::vector<ClusterId>{}, py::arg("partition_m") = std::vector<ClusterId>{});

    mod.def(
        "kendall_tau_b",
        [](const std::vector<std::int64_t>& xs, const std::vector<std::int64_t>& ys) { return kendall_tau_b(xs, ys); },
        py::arg("xs"), py::arg("ys"));

    mod.def(
        "correlations", [](const MultilayerNetwork& net) { return to_json_text(to_json(correlation_report(net))); },
        py::arg("network"));

    mod.def(
        "embeddedness_histogram",
        [](const MultilayerNetwork& net) {
            const auto h = embeddedness_histogram(net);
            py::list rows;
            for (const auto& b : h.bins) {
                rows.append(py::make_tuple(b.embeddedness, b.count(), h.pct_of_positives(b), h.pct_of_negatives(b),
                                           b.positive_rate()));
            }
            return rows;
        },
        py::arg("network"), "(bin, n, pct_of_positives, pct_of_negatives, positive_rate) per non-empty bin");
}
