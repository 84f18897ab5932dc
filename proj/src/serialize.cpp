#include "twoway/serialize.hpp"

#include <fstream>
#include <sstream>

#ifndef TWOWAY_VERSION
#define TWOWAY_VERSION "0.0.0"
#endif

namespace twoway {
namespace {

template <class T>
void read_field(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("serialize", std::string("field '") + key + "': " + e.what());
    }
}

template <class T>
T required(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError("serialize", std::string("missing field '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("serialize", std::string("field '") + key + "': " + e.what());
    }
}

Json layer_json(const SourceLayerConfig& c) {
    return Json{{"clusters", c.clusters}, {"p_in", c.p_in}, {"p_out", c.p_out}};
}

SourceLayerConfig layer_from_json(const Json& j, SourceLayerConfig c) {
    read_field(j, "clusters", c.clusters);
    read_field(j, "p_in", c.p_in);
    read_field(j, "p_out", c.p_out);
    return c;
}

Json standardizer_json(const Standardizer& s) { return Json{{"mean", s.mean}, {"stddev", s.stddev}}; }

}  // namespace

const char* toolkit_version() noexcept { return TWOWAY_VERSION; }

Json to_json(const GenConfig& cfg) {
    return Json{{"node_count", cfg.node_count},
                {"r", layer_json(cfg.r)},
                {"m", layer_json(cfg.m)},
                {"membership_correlation", cfg.membership_correlation},
                {"f_edge_count", cfg.f_edge_count},
                {"f_locality", cfg.f_locality},
                {"f_closure", cfg.f_closure},
                {"sign",
                 {{"alpha", cfg.sign.alpha},
                  {"beta_cluster", cfg.sign.beta_cluster},
                  {"beta_embed", cfg.sign.beta_embed}}},
                {"seed", cfg.seed}};
}

GenConfig gen_config_from_json(const Json& j) {
    if (!j.is_object()) throw FormatError("serialize", "generator config must be a JSON object");
    GenConfig cfg;
    read_field(j, "node_count", cfg.node_count);
    if (j.contains("r")) cfg.r = layer_from_json(j.at("r"), cfg.r);
    if (j.contains("m")) cfg.m = layer_from_json(j.at("m"), cfg.m);
    read_field(j, "membership_correlation", cfg.membership_correlation);
    read_field(j, "f_edge_count", cfg.f_edge_count);
    read_field(j, "f_locality", cfg.f_locality);
    read_field(j, "f_closure", cfg.f_closure);
    if (j.contains("sign")) {
        const auto& s = j.at("sign");
        read_field(s, "alpha", cfg.sign.alpha);
        read_field(s, "beta_cluster", cfg.sign.beta_cluster);
        read_field(s, "beta_embed", cfg.sign.beta_embed);
    }
    read_field(j, "seed", cfg.seed);
    return cfg;
}

Json to_json(const GroundTruth& truth) {
    Json edges = Json::array();
    for (const auto& e : truth.f_edges) {
        edges.push_back(Json{{"src", e.src},
                             {"dst", e.dst},
                             {"same_cluster", e.same_cluster},
                             {"embeddedness", e.embeddedness},
                             {"p_positive", e.p_positive},
                             {"sign", to_int(e.sign)}});
    }
    return Json{{"membership_r", truth.membership_r},
                {"membership_m", truth.membership_m},
                {"f_edges", std::move(edges)}};
}

Json to_json(const Partition& p) {
    return Json{{"layer", std::string(to_string(p.layer))},
                {"cluster_count", p.cluster_count},
                {"assignment", p.assignment}};
}

Partition partition_from_json(const Json& j) {
    Partition p;
    try {
        p.layer = parse_layer(required<std::string>(j, "layer"));
    } catch (const DomainError& e) {
        throw FormatError("serialize", e.what());
    }
    p.cluster_count = required<std::size_t>(j, "cluster_count");
    p.assignment = required<std::vector<ClusterId>>(j, "assignment");
    try {
        p.validate(p.assignment.size());
    } catch (const Error& e) {
        throw FormatError("serialize", std::string("bad partition: ") + e.what());
    }
    return p;
}

Json to_json(const FittedPredictor& model) {
    Json j;
    j["format_version"] = kFormatVersion;
    j["predictor"] = std::string(to_string(model.kind));
    if (model.kind == PredictorKind::Mf) {
        j["type"] = "mf";
        j["node_count"] = model.mf.node_count;
        j["rank"] = model.mf.rank;
        j["lambda"] = model.mf.params.lambda;
        j["learning_rate"] = model.mf.params.learning_rate;
        j["epochs"] = model.mf.params.epochs;
        j["seed"] = model.mf.params.seed;
        j["U"] = model.mf.u;
        j["V"] = model.mf.v;
        return j;
    }
    j["type"] = "svm";
    j["weights"] = model.svm.weights;
    j["bias"] = model.svm.bias;
    j["class_weights"] = Json{{"+1", model.svm.weight_positive}, {"-1", model.svm.weight_negative}};
    j["lambda"] = model.svm.params.lambda;
    j["epochs"] = model.svm.params.epochs;
    j["seed"] = model.svm.params.seed;
    j["class_weighted"] = model.svm.params.class_weighted;
    j["standardizer"] = standardizer_json(model.standardizer);
    j["columns"] = model.columns;
    return j;
}

FittedPredictor predictor_from_json(const Json& j) {
    FittedPredictor model;
    const auto type = required<std::string>(j, "type");
    try {
        model.kind = parse_predictor(required<std::string>(j, "predictor"));
    } catch (const DomainError& e) {
        throw FormatError("serialize", e.what());
    }
    if (type == "mf") {
        if (model.kind != PredictorKind::Mf) throw FormatError("serialize", "mf model with a non-MF predictor");
        auto& mf = model.mf;
        mf.node_count = required<std::size_t>(j, "node_count");
        mf.rank = required<std::size_t>(j, "rank");
        mf.u = required<std::vector<double>>(j, "U");
        mf.v = required<std::vector<double>>(j, "V");
        mf.params.rank = mf.rank;
        read_field(j, "lambda", mf.params.lambda);
        read_field(j, "learning_rate", mf.params.learning_rate);
        read_field(j, "epochs", mf.params.epochs);
        read_field(j, "seed", mf.params.seed);
        if (mf.u.size() != mf.node_count * mf.rank || mf.v.size() != mf.node_count * mf.rank) {
            throw FormatError("serialize", "factor matrices do not match node_count x rank");
        }
        return model;
    }
    if (type != "svm") throw FormatError("serialize", "unknown model type '" + type + "'");
    if (model.kind == PredictorKind::Mf || model.kind == PredictorKind::Random) {
        throw FormatError("serialize", "svm model with a predictor that has no features");
    }
    model.svm.weights = required<std::vector<double>>(j, "weights");
    model.svm.bias = required<double>(j, "bias");
    model.columns = required<std::vector<std::string>>(j, "columns");
    const auto& st = j.contains("standardizer") ? j.at("standardizer") : Json::object();
    model.standardizer.mean = required<std::vector<double>>(st, "mean");
    model.standardizer.stddev = required<std::vector<double>>(st, "stddev");
    if (j.contains("class_weights")) {
        read_field(j.at("class_weights"), "+1", model.svm.weight_positive);
        read_field(j.at("class_weights"), "-1", model.svm.weight_negative);
    }
    read_field(j, "lambda", model.svm.params.lambda);
    read_field(j, "epochs", model.svm.params.epochs);
    read_field(j, "seed", model.svm.params.seed);
    read_field(j, "class_weighted", model.svm.params.class_weighted);
    const auto width = model.columns.size();
    if (model.svm.weights.size() != width || model.standardizer.mean.size() != width ||
        model.standardizer.stddev.size() != width) {
        throw FormatError("serialize", "weights, standardizer and columns differ in length");
    }
    return model;
}

Json to_json(const ExperimentConfig& cfg) {
    return Json{{"seed", cfg.seed},
                {"svm",
                 {{"lambda", cfg.svm.lambda},
                  {"epochs", cfg.svm.epochs},
                  {"class_weighted", cfg.svm.class_weighted}}},
                {"mf",
                 {{"rank", cfg.mf.rank},
                  {"lambda", cfg.mf.lambda},
                  {"learning_rate", cfg.mf.learning_rate},
                  {"epochs", cfg.mf.epochs}}}};
}

Json to_json(const EvalReport& report) {
    Json folds = Json::array();
    for (const auto& f : report.folds) {
        Json fold{{"fold", f.fold},
                  {"train_size", f.train_size},
                  {"test_size", f.test_size},
                  {"tp", f.confusion.tp},
                  {"fn", f.confusion.fn},
                  {"tn", f.confusion.tn},
                  {"fp", f.confusion.fp}};
        fold["balanced_accuracy"] = f.balanced_accuracy ? Json(*f.balanced_accuracy) : Json(nullptr);
        if (!f.warning.empty()) fold["warning"] = f.warning;
        folds.push_back(std::move(fold));
    }
    Json j{{"predictor", std::string(to_string(report.predictor))},
           {"k", report.k},
           {"fold_seed", report.fold_seed},
           {"config", to_json(report.config)}};
    if (report.predictor == PredictorKind::CbMp || report.predictor == PredictorKind::NbMp) {
        j["config"]["mode"] = std::string(to_string(feature_mode(report.predictor)));
    }
    j["folds"] = std::move(folds);
    j["mean_balanced_accuracy"] =
        report.mean_balanced_accuracy ? Json(*report.mean_balanced_accuracy) : Json(nullptr);
    j["warnings"] = report.warnings;
    return j;
}

Json to_json(const CorrelationReport& report) {
    const auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
    Json pairs = Json::array();
    for (const auto& p : report.pairs) {
        pairs.push_back(Json{{"layers", {std::string(to_string(p.a)), std::string(to_string(p.b))}},
                             {"kendall_tau_in_degree", opt(p.tau_in)},
                             {"kendall_tau_out_degree", opt(p.tau_out)},
                             {"hamming_in_activity", p.hamming_in},
                             {"hamming_out_activity", p.hamming_out},
                             {"common_edges", p.common}});
    }
    const auto& o = report.overlap;
    return Json{{"pairs", std::move(pairs)},
                {"f_overlap",
                 {{"f_total", o.f_total},
                  {"in_m", o.in_m},
                  {"in_r", o.in_r},
                  {"in_either", o.in_either},
                  {"in_all", o.in_all},
                  {"in_neither", o.in_neither}}}};
}

Json manifest_json(std::size_t node_count, const std::string& f, const std::string& m,
                   const std::string& r) {
    return Json{{"node_count", node_count}, {"layers", {{"F", f}, {"M", m}, {"R", r}}}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("serialize", "cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("serialize", path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NotFoundError("serialize", "cannot write " + path.string());
    out << text;
}

}  // namespace twoway
