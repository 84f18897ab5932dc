// twoway: generate, analyze, cluster, featurize, evaluate, train, predict.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twoway/analysis.hpp"
#include "twoway/community.hpp"
#include "twoway/evaluation.hpp"
#include "twoway/io.hpp"
#include "twoway/metapath.hpp"
#include "twoway/serialize.hpp"
#include "twoway/synthgen.hpp"

namespace fs = std::filesystem;
using namespace twoway;

namespace {

constexpr int kUsageError = 2;
constexpr int kComponentError = 1;

struct Options {
    // shared
    std::string manifest;
    std::string out;
    std::string partitions;
    std::string pairs;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    // gen
    std::string preset;
    std::string config;
    std::optional<std::uint64_t> gen_seed;
    // cluster
    double teleport = 0.15;
    std::string clusterer = "infomap";
    // featurize
    std::string mode = "both";
    // evaluate / train
    std::string predictors = "cbmp,nbmp,nbsp,mf,random";
    std::string predictor = "cbmp";
    std::size_t k = 10;
    std::optional<std::uint64_t> model_seed;
    std::uint64_t cluster_seed = 0;
    bool unweighted = false;
    // predict
    std::string model;
};

std::string compact(const Json& j) { return j.dump(); }

Json base_run_config(const std::string& subcommand) {
    return Json{{"subcommand", subcommand},
                {"toolkit_version", toolkit_version()},
                {"format_version", kFormatVersion}};
}

std::string csv_number(double x) {
    std::ostringstream s;
    s << std::setprecision(17) << x;
    return s.str();
}

fs::path out_dir(const Options& o) {
    const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
    fs::create_directories(dir);
    return dir;
}

fs::path partitions_dir(const Options& o) {
    if (!o.partitions.empty()) return o.partitions;
    return fs::path(o.manifest).parent_path();
}

std::optional<std::pair<Partition, Partition>> read_partitions(const fs::path& dir) {
    const auto r = dir / "partition_R.json";
    const auto m = dir / "partition_M.json";
    if (!fs::exists(r) || !fs::exists(m)) return std::nullopt;
    return std::pair{partition_from_json(read_json(r)), partition_from_json(read_json(m))};
}

std::pair<Partition, Partition> require_partitions(const fs::path& dir) {
    auto parts = read_partitions(dir);
    if (!parts) {
        throw NotFoundError("cli", "no partition_R.json / partition_M.json in " + dir.string() +
                                       " (run `twoway cluster` first)");
    }
    return std::move(*parts);
}

std::pair<Partition, Partition> singleton_partitions(const MultilayerNetwork& net) {
    return {Partition::singletons(Layer::R, net.node_count()),
            Partition::singletons(Layer::M, net.node_count())};
}

// Hides the query's own F edge when present.
MaskedView query_view(const MultilayerNetwork& net, NodeId u, NodeId v) {
    return MaskedView(net).hiding(u, v);
}

void check_query(const MultilayerNetwork& net, const QueryPair& q) {
    net.check_node(q.src);
    net.check_node(q.dst);
}

std::string label_field(const std::optional<Sign>& s) {
    return s ? std::string(to_string(*s)) : std::string();
}

int cmd_gen(const Options& o) {
    if (o.preset.empty() == o.config.empty()) {
        throw DomainError("cli", "gen needs exactly one of --preset or --config");
    }
    GenConfig cfg = o.preset.empty() ? gen_config_from_json(read_json(o.config)) : preset(o.preset);
    if (o.gen_seed) cfg.seed = *o.gen_seed;
    const auto synth = generate(cfg);
    const auto dir = out_dir(o);

    Json run = base_run_config("gen");
    run["preset"] = o.preset.empty() ? Json(nullptr) : Json(o.preset);
    run["config_path"] = o.config.empty() ? Json(nullptr) : Json(o.config);
    run["out"] = dir.string();
    run["seeds"] = {{"generator", cfg.seed}};
    run["gen_config"] = to_json(cfg);
    const std::vector<std::string> header{"run_config: " + compact(run)};

    for (const auto& [layer, name] : {std::pair{Layer::F, "F.txt"}, std::pair{Layer::M, "M.txt"},
                                      std::pair{Layer::R, "R.txt"}}) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) throw NotFoundError("cli", "cannot write " + (dir / name).string());
        write_layer_file(f, synth.network.edges(layer), header);
    }
    auto manifest = manifest_json(cfg.node_count, "F.txt", "M.txt", "R.txt");
    manifest["run_config"] = run;
    write_text(dir / "manifest.json", dump(manifest));

    Json truth = to_json(synth.truth);
    truth["sign_model"] = to_json(cfg)["sign"];
    truth["run_config"] = run;
    write_text(dir / "ground_truth.json", dump(truth));

    std::cout << "wrote " << cfg.node_count << " nodes, F=" << synth.network.edge_count(Layer::F)
              << " M=" << synth.network.edge_count(Layer::M)
              << " R=" << synth.network.edge_count(Layer::R) << " to " << dir.string() << '\n';
    return 0;
}

int cmd_analyze(const Options& o) {
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    const auto dir = out_dir(o);
    Json run = base_run_config("analyze");
    run["manifest"] = o.manifest;
    run["out"] = dir.string();
    run["seeds"] = Json::object();

    Json corr = to_json(correlation_report(net));
    corr["run_config"] = run;
    write_text(dir / "correlations.json", dump(corr));

    const auto hist = embeddedness_histogram(net);
    std::ostringstream csv;
    csv << "# run_config: " << compact(run) << '\n';
    csv << "bin,n,pct_of_positives,pct_of_negatives,positive_rate\n";
    for (const auto& b : hist.bins) {
        csv << b.embeddedness << ',' << b.count() << ',' << csv_number(hist.pct_of_positives(b)) << ','
            << csv_number(hist.pct_of_negatives(b)) << ',' << csv_number(b.positive_rate()) << '\n';
    }
    write_text(dir / "embeddedness.csv", csv.str());
    std::cout << "wrote correlations.json and embeddedness.csv to " << dir.string() << '\n';
    return 0;
}

int cmd_cluster(const Options& o) {
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    const fs::path dir = o.out.empty() ? fs::path(o.manifest).parent_path() : out_dir(o);
    if (!dir.empty()) fs::create_directories(dir);

    Json run = base_run_config("cluster");
    run["manifest"] = o.manifest;
    run["out"] = dir.string();
    run["clusterer"] = o.clusterer;
    run["teleport"] = o.teleport;
    run["seeds"] = {{"clusterer", o.seed}};

    std::optional<std::pair<Partition, Partition>> from_file;
    if (o.clusterer.rfind("file:", 0) == 0) {
        from_file = require_partitions(o.clusterer.substr(5));
    } else if (o.clusterer != "infomap" && o.clusterer != "components") {
        throw DomainError("cli", "unknown clusterer '" + o.clusterer + "'");
    }

    for (Layer layer : {Layer::R, Layer::M}) {
        const auto graph = layer_digraph(net, layer);
        const auto rates = visit_rates(graph, o.teleport);
        const auto singles = Partition::singletons(layer, net.node_count());
        const double before = map_equation(graph, rates, singles.assignment);
        Partition part;
        if (o.clusterer == "infomap") {
            InfomapOptions opts;
            opts.teleport = o.teleport;
            opts.seed = o.seed;
            part = run_infomap(net, layer, opts).partition;
        } else if (o.clusterer == "components") {
            part = connected_components(net, layer);
        } else {
            part = layer == Layer::R ? from_file->first : from_file->second;
            if (part.layer != layer) throw FormatError("cli", "partition file has the wrong layer");
            part.validate(net.node_count());
        }
        const double after = map_equation(graph, rates, part.assignment);
        std::cout << to_string(layer) << ": " << part.cluster_count << " clusters, codelength "
                  << std::fixed << std::setprecision(6) << before << " -> " << after << " bits\n"
                  << std::defaultfloat;
        Json j = to_json(part);
        j["codelength_before"] = before;
        j["codelength_after"] = after;
        j["run_config"] = run;
        write_text(dir / ("partition_" + std::string(to_string(layer)) + ".json"), dump(j));
    }
    return 0;
}

int cmd_featurize(const Options& o) {
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    const auto mode = parse_feature_mode(o.mode);
    auto parts = mode == FeatureMode::NB ? singleton_partitions(net) : require_partitions(partitions_dir(o));
    const AugmentedNetwork aug(net, std::move(parts.first), std::move(parts.second));
    const auto pairs = read_pairs(o.pairs);

    Json run = base_run_config("featurize");
    run["manifest"] = o.manifest;
    run["partitions"] = partitions_dir(o).string();
    run["pairs"] = o.pairs;
    run["mode"] = o.mode;
    run["seeds"] = Json::object();

    std::ostringstream csv;
    csv << "# run_config: " << compact(run) << '\n';
    csv << "src,dst,label";
    for (const auto& name : feature_columns(mode)) csv << ',' << name;
    csv << '\n';
    PathCounter counter(aug);
    for (const auto& q : pairs) {
        check_query(net, q);
        const auto row = counter.row(query_view(net, q.src, q.dst), q.src, q.dst, mode, q.label);
        csv << q.src << ',' << q.dst << ',' << label_field(row.label);
        for (auto c : row.counts) csv << ',' << c;
        csv << '\n';
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(o.out, csv.str());
    }
    return 0;
}

AugmentedNetwork augmented_for(const MultilayerNetwork& net, const Options& o, Json& run,
                               bool need_clusters) {
    if (!need_clusters) {
        auto s = singleton_partitions(net);
        return AugmentedNetwork(net, std::move(s.first), std::move(s.second));
    }
    const auto dir = partitions_dir(o);
    if (auto parts = read_partitions(dir)) {
        run["partitions"] = dir.string();
        return AugmentedNetwork(net, std::move(parts->first), std::move(parts->second));
    }
    run["partitions"] = nullptr;
    run["clustered_inline"] = {{"teleport", o.teleport}, {"seed", o.cluster_seed}};
    return AugmentedNetwork(net, cluster_layer(net, Layer::R, o.teleport, o.cluster_seed),
                            cluster_layer(net, Layer::M, o.teleport, o.cluster_seed));
}

ExperimentConfig experiment_config(const Options& o) {
    ExperimentConfig cfg;
    cfg.seed = o.model_seed.value_or(o.seed);
    cfg.threads = o.threads;
    cfg.svm.class_weighted = !o.unweighted;
    return cfg;
}

int cmd_evaluate(const Options& o) {
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    const auto kinds = parse_predictor_list(o.predictors);
    bool need_clusters = false;
    for (auto k : kinds) need_clusters |= k == PredictorKind::CbMp;
    const auto dir = out_dir(o);
    const auto cfg = experiment_config(o);

    Json run = base_run_config("evaluate");
    run["manifest"] = o.manifest;
    run["out"] = dir.string();
    Json names = Json::array();
    for (auto k : kinds) names.push_back(std::string(to_string(k)));
    run["predictors"] = names;
    run["k"] = o.k;
    run["threads"] = o.threads;
    run["seeds"] = {{"folds", o.seed}, {"models", cfg.seed}, {"clusterer", o.cluster_seed}};
    run["experiment"] = to_json(cfg);
    const auto aug = augmented_for(net, o, run, need_clusters);

    const auto plan = kfold_split(net.edges(Layer::F), o.k, o.seed);
    Json reports = Json::array();
    std::ostringstream csv;
    csv << "# run_config: " << compact(run) << '\n';
    csv << "predictor,fold,test_size,tp,fn,tn,fp,balanced_accuracy\n";
    for (auto kind : kinds) {
        const auto report = run_experiment(aug, kind, plan, cfg);
        Json j = to_json(report);
        j["run_config"] = run;
        reports.push_back(std::move(j));
        for (const auto& f : report.folds) {
            csv << to_string(kind) << ',' << f.fold << ',' << f.test_size << ',' << f.confusion.tp << ','
                << f.confusion.fn << ',' << f.confusion.tn << ',' << f.confusion.fp << ','
                << (f.balanced_accuracy ? csv_number(*f.balanced_accuracy) : "") << '\n';
        }
        csv << to_string(kind) << ",mean,,,,,,"
            << (report.mean_balanced_accuracy ? csv_number(*report.mean_balanced_accuracy) : "") << '\n';
        for (const auto& w : report.warnings) std::cerr << "warning: " << to_string(kind) << ' ' << w << '\n';
        std::cout << std::left << std::setw(7) << to_string(kind) << " mean balanced accuracy "
                  << (report.mean_balanced_accuracy ? csv_number(*report.mean_balanced_accuracy)
                                                    : std::string("undefined"))
                  << '\n';
    }
    write_text(dir / "report.json", dump(reports));
    write_text(dir / "report.csv", csv.str());
    return 0;
}

int cmd_train(const Options& o) {
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    const auto kind = parse_predictor(o.predictor);
    if (kind == PredictorKind::Random) throw DomainError("cli", "the random predictor has no model");
    const auto cfg = experiment_config(o);
    Json run = base_run_config("train");
    run["manifest"] = o.manifest;
    run["predictor"] = std::string(to_string(kind));
    run["seeds"] = {{"model", cfg.seed}, {"clusterer", o.cluster_seed}};
    run["experiment"] = to_json(cfg);
    const auto aug = augmented_for(net, o, run, kind == PredictorKind::CbMp);
    const auto& edges = net.edges(Layer::F);
    auto model = fit_predictor(kind, aug, MaskedView(net), edges, cfg, cfg.seed);
    Json j = to_json(model);
    j["run_config"] = run;
    const fs::path path = o.out.empty() ? fs::path("model.json") : fs::path(o.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_text(path, dump(j));
    std::cout << "wrote " << to_string(kind) << " model trained on " << edges.size() << " edges to "
              << path.string() << '\n';
    return 0;
}

int cmd_predict(const Options& o) {
    const auto model = predictor_from_json(read_json(o.model));
    const auto data = load_dataset(o.manifest);
    const auto& net = data.network;
    Json run = base_run_config("predict");
    run["manifest"] = o.manifest;
    run["model"] = o.model;
    run["pairs"] = o.pairs;
    run["seeds"] = Json::object();
    const auto aug = augmented_for(net, o, run, model.kind == PredictorKind::CbMp);
    const auto pairs = read_pairs(o.pairs);

    std::ostringstream csv;
    csv << "# run_config: " << compact(run) << '\n';
    csv << "src,dst,margin,predicted_sign\n";
    PathCounter counter(aug);
    for (const auto& q : pairs) {
        check_query(net, q);
        const double m = predictor_margin(model, counter, MaskedView(net), q.src, q.dst);
        csv << q.src << ',' << q.dst << ',' << csv_number(m) << ',' << (m >= 0.0 ? "+1" : "-1") << '\n';
    }
    if (o.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text(o.out, csv.str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sign prediction for two-way relations in multilayer networks"};
    app.set_version_flag("--version", std::string("twoway ") + toolkit_version() + " (format " +
                                          std::to_string(kFormatVersion) + ")");
    app.require_subcommand(1);
    Options o;
    std::function<int(const Options&)> action;

    auto* gen = app.add_subcommand("gen", "Generate a synthetic three-layer network");
    gen->add_option("--preset", o.preset, "desk or paper-scale");
    gen->add_option("--config", o.config, "Generator config JSON");
    gen->add_option("--seed", o.gen_seed, "Override the generator seed");
    gen->add_option("--out", o.out, "Output directory")->required();
    gen->callback([&] { action = cmd_gen; });

    auto* analyze = app.add_subcommand("analyze", "Layer correlations and embeddedness histogram");
    analyze->add_option("--manifest", o.manifest)->required();
    analyze->add_option("--out", o.out, "Output directory");
    analyze->callback([&] { action = cmd_analyze; });

    auto* cluster = app.add_subcommand("cluster", "Cluster the M and R layers");
    cluster->add_option("--manifest", o.manifest)->required();
    cluster->add_option("--out", o.out, "Output directory (default: next to the manifest)");
    cluster->add_option("--teleport", o.teleport, "Teleportation probability")->capture_default_str();
    cluster->add_option("--seed", o.seed, "Clusterer seed")->capture_default_str();
    cluster->add_option("--clusterer", o.clusterer, "infomap, components or file:DIR")->capture_default_str();
    cluster->callback([&] { action = cmd_cluster; });

    auto* featurize = app.add_subcommand("featurize", "Meta-path counts for query pairs");
    featurize->add_option("--manifest", o.manifest)->required();
    featurize->add_option("--partitions", o.partitions, "Directory with partition files");
    featurize->add_option("--pairs", o.pairs, "Pairs file: src dst [sign]")->required();
    featurize->add_option("--mode", o.mode, "nb, cb or both")
        ->check(CLI::IsMember({"nb", "cb", "both"}))
        ->capture_default_str();
    featurize->add_option("--out", o.out, "Output CSV (default: stdout)");
    featurize->callback([&] { action = cmd_featurize; });

    const auto model_flags = [&](CLI::App* sub) {
        sub->add_option("--manifest", o.manifest)->required();
        sub->add_option("--partitions", o.partitions, "Directory with partition files");
        sub->add_option("--model-seed", o.model_seed, "Model seed (default: --seed)");
        sub->add_option("--cluster-seed", o.cluster_seed, "Seed when clustering inline")->capture_default_str();
        sub->add_option("--teleport", o.teleport, "Teleportation when clustering inline")->capture_default_str();
        sub->add_flag("--unweighted", o.unweighted, "Disable SVM class weights");
    };

    auto* evaluate = app.add_subcommand("evaluate", "Cross-validated sign prediction");
    model_flags(evaluate);
    evaluate->add_option("--predictors", o.predictors, "Comma-separated predictors")->capture_default_str();
    evaluate->add_option("--k", o.k, "Fold count")->capture_default_str();
    evaluate->add_option("--seed", o.seed, "Fold seed")->capture_default_str();
    evaluate->add_option("--threads", o.threads, "Parallel folds")->check(CLI::PositiveNumber)->capture_default_str();
    evaluate->add_option("--out", o.out, "Output directory");
    evaluate->callback([&] { action = cmd_evaluate; });

    auto* train = app.add_subcommand("train", "Fit one predictor on every F edge");
    model_flags(train);
    train->add_option("--predictor", o.predictor, "cbmp, nbmp, nbsp or mf")->capture_default_str();
    train->add_option("--seed", o.seed, "Model seed")->capture_default_str();
    train->add_option("--out", o.out, "Model JSON path");
    train->callback([&] { action = cmd_train; });

    auto* predict = app.add_subcommand("predict", "Score query pairs with a trained model");
    predict->add_option("--model", o.model)->required();
    predict->add_option("--manifest", o.manifest)->required();
    predict->add_option("--partitions", o.partitions, "Directory with partition files");
    predict->add_option("--pairs", o.pairs)->required();
    predict->add_option("--out", o.out, "Output CSV (default: stdout)");
    predict->callback([&] { action = cmd_predict; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        return action(o);
    } catch (const Error& e) {
        std::cerr << e.module() << ": " << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "twoway: " << e.what() << '\n';
    }
    return kComponentError;
}
