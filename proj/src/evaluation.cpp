#include "twoway/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "twoway/rng.hpp"

namespace twoway {
namespace {

std::string lower_alnum(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    return out;
}

std::vector<std::pair<NodeId, NodeId>> pairs_of(std::span<const SignedEdge> edges) {
    std::vector<std::pair<NodeId, NodeId>> out;
    out.reserve(edges.size());
    for (const auto& e : edges) out.emplace_back(e.src, e.dst);
    return out;
}

Sign label_of(const SignedEdge& e) {
    if (!e.sign) throw DomainError("evalharness", "F edge without a sign");
    return *e.sign;
}

// Features of (u, v) on a view that already hides the pair.
std::vector<double> features_on(PredictorKind kind, PathCounter& counter, const MaskedView& own,
                                NodeId u, NodeId v) {
    std::vector<std::uint64_t> counts;
    if (kind == PredictorKind::NbSp) {
        counts = nbsp_features(own, u, v);
    } else {
        counts = counter.row(own, u, v, feature_mode(kind)).counts;
    }
    return {counts.begin(), counts.end()};
}

// Every harness featurization goes through here so the observer sees the
// exact view handed to the counters.
std::vector<double> observed_features(PredictorKind kind, PathCounter& counter, const MaskedView& view,
                                      NodeId u, NodeId v, const ExperimentConfig& config, std::size_t fold) {
    const MaskedView own = view.hiding(u, v);
    if (config.on_featurize) config.on_featurize(fold, own, u, v);
    return features_on(kind, counter, own, u, v);
}

FoldResult run_fold(const AugmentedNetwork& net, PredictorKind kind, const FoldPlan& plan,
                    std::size_t fold, const ExperimentConfig& config) {
    const auto& test = plan.folds[fold];
    std::vector<SignedEdge> train;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        if (f != fold) train.insert(train.end(), plan.folds[f].begin(), plan.folds[f].end());
    }
    const auto hidden = pairs_of(test);
    const MaskedView view = mask_f_edges(net.base(), hidden);
    const auto seed = fold_seed(config.seed, fold);

    FoldResult result;
    result.fold = fold;
    result.train_size = train.size();
    result.test_size = test.size();
    std::vector<std::string> notes;

    if (kind == PredictorKind::Random) {
        RandomPredictor coin(seed);
        for (const auto& e : test) result.confusion.add(label_of(e), coin.next());
    } else {
        std::optional<FittedPredictor> model;
        std::optional<Sign> constant;
        try {
            model = fit_predictor(kind, net, view, train, config, seed, fold);
        } catch (const DegenerateTrainingError& err) {
            // Single-class training data: predict that class.
            constant = train.empty() ? Sign::Positive : label_of(train.front());
            notes.push_back(std::string(err.what()) + ", predicting " +
                            std::string(to_string(*constant)));
        }
        PathCounter counter(net);
        for (const auto& e : test) {
            Sign predicted = constant.value_or(Sign::Positive);
            if (model) {
                const double m =
                    kind == PredictorKind::Mf
                        ? model->mf.margin(e.src, e.dst)
                        : model->svm.margin(model->standardizer.transform(
                              observed_features(kind, counter, view, e.src, e.dst, config, fold)));
                predicted = m >= 0.0 ? Sign::Positive : Sign::Negative;
            }
            result.confusion.add(label_of(e), predicted);
        }
    }

    try {
        result.balanced_accuracy = balanced_accuracy(result.confusion);
    } catch (const UndefinedMetricError& err) {
        notes.push_back(err.what());
    }
    for (const auto& note : notes) {
        result.warning += (result.warning.empty() ? "fold " + std::to_string(fold) + ": " : "; ") + note;
    }
    return result;
}

}  // namespace

void Confusion::add(Sign truth, Sign predicted) {
    if (truth == Sign::Positive) {
        (predicted == Sign::Positive ? tp : fn) += 1;
    } else {
        (predicted == Sign::Negative ? tn : fp) += 1;
    }
}

double balanced_accuracy(const Confusion& c) {
    if (c.tp + c.fn == 0 || c.tn + c.fp == 0) {
        throw UndefinedMetricError("evalharness",
                                   "balanced accuracy needs both classes in the test set");
    }
    const double tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    const double tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
    return (tpr + tnr) / 2.0;
}

FoldPlan kfold_split(std::span<const SignedEdge> f_edges, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw DomainError("evalharness", "k-fold split needs k >= 2");
    if (f_edges.size() < k) {
        throw DomainError("evalharness", "cannot split " + std::to_string(f_edges.size()) +
                                             " edges into " + std::to_string(k) + " folds");
    }
    std::vector<SignedEdge> shuffled(f_edges.begin(), f_edges.end());
    Rng rng(seed);
    rng.shuffle(std::span<SignedEdge>(shuffled));
    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.folds.resize(k);
    const std::size_t base = shuffled.size() / k;
    const std::size_t extra = shuffled.size() % k;
    auto it = shuffled.begin();
    for (std::size_t f = 0; f < k; ++f) {
        const auto size = static_cast<std::ptrdiff_t>(base + (f < extra ? 1 : 0));
        plan.folds[f].assign(it, it + size);
        it += size;
    }
    return plan;
}

std::string_view to_string(PredictorKind kind) noexcept {
    switch (kind) {
        case PredictorKind::CbMp: return "CB-MP";
        case PredictorKind::NbMp: return "NB-MP";
        case PredictorKind::NbSp: return "NB-SP";
        case PredictorKind::Mf: return "MF";
        case PredictorKind::Random: return "Random";
    }
    return "Random";
}

PredictorKind parse_predictor(std::string_view name) {
    const auto key = lower_alnum(name);
    if (key == "cbmp") return PredictorKind::CbMp;
    if (key == "nbmp") return PredictorKind::NbMp;
    if (key == "nbsp" || key == "nbsn") return PredictorKind::NbSp;
    if (key == "mf") return PredictorKind::Mf;
    if (key == "random") return PredictorKind::Random;
    throw DomainError("evalharness", "unknown predictor '" + std::string(name) + "'");
}

std::vector<PredictorKind> parse_predictor_list(std::string_view csv) {
    std::vector<PredictorKind> out;
    std::size_t start = 0;
    while (start <= csv.size()) {
        const auto end = std::min(csv.find(',', start), csv.size());
        const auto item = csv.substr(start, end - start);
        if (!item.empty()) out.push_back(parse_predictor(item));
        start = end + 1;
    }
    if (out.empty()) throw DomainError("evalharness", "no predictors selected");
    return out;
}

std::uint64_t fold_seed(std::uint64_t base, std::size_t fold) noexcept {
    // splitmix64 finalizer over (base, fold)
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(fold) + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

FeatureMode feature_mode(PredictorKind kind) {
    if (kind == PredictorKind::CbMp) return FeatureMode::CB;
    if (kind == PredictorKind::NbMp) return FeatureMode::NB;
    throw DomainError("evalharness", std::string(to_string(kind)) + " has no meta-path features");
}

std::vector<double> pair_features(PredictorKind kind, PathCounter& counter, const MaskedView& view,
                                  NodeId u, NodeId v) {
    return features_on(kind, counter, view.hiding(u, v), u, v);
}

FittedPredictor fit_predictor(PredictorKind kind, const AugmentedNetwork& net, const MaskedView& view,
                              std::span<const SignedEdge> train, const ExperimentConfig& config,
                              std::uint64_t seed, std::size_t fold) {
    FittedPredictor model;
    model.kind = kind;
    if (kind == PredictorKind::Random) {
        throw DomainError("evalharness", "the random predictor is not trained");
    }
    if (kind == PredictorKind::Mf) {
        auto params = config.mf;
        params.seed = seed;
        model.mf = train_mf(net.base().node_count(), train, params);
        return model;
    }
    model.columns = kind == PredictorKind::NbSp ? nbsp_columns() : feature_columns(feature_mode(kind));
    PathCounter counter(net);
    DenseMatrix x(0, model.columns.size());
    x.data.reserve(train.size() * model.columns.size());
    std::vector<Sign> y;
    y.reserve(train.size());
    for (const auto& e : train) {
        x.append(observed_features(kind, counter, view, e.src, e.dst, config, fold));
        y.push_back(label_of(e));
    }
    model.standardizer = Standardizer::fit(x);
    model.standardizer.transform_in_place(x);
    auto params = config.svm;
    params.seed = seed;
    model.svm = train_svm(x, y, params);
    return model;
}

double predictor_margin(const FittedPredictor& model, PathCounter& counter, const MaskedView& view,
                        NodeId u, NodeId v) {
    if (model.kind == PredictorKind::Mf) return model.mf.margin(u, v);
    const auto raw = pair_features(model.kind, counter, view, u, v);
    return model.svm.margin(model.standardizer.transform(raw));
}

EvalReport run_experiment(const AugmentedNetwork& net, PredictorKind kind, const FoldPlan& plan,
                          const ExperimentConfig& config) {
    EvalReport report;
    report.predictor = kind;
    report.k = plan.k;
    report.fold_seed = plan.seed;
    report.config = config;
    report.config.on_featurize = nullptr;
    report.folds.resize(plan.folds.size());

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, plan.folds.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        for (std::size_t f = next++; f < plan.folds.size(); f = next++) {
            try {
                report.folds[f] = run_fold(net, kind, plan, f, config);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    double sum = 0.0;
    std::size_t defined = 0;
    for (const auto& f : report.folds) {
        if (f.balanced_accuracy) {
            sum += *f.balanced_accuracy;
            ++defined;
        } else {
            report.warnings.push_back(f.warning);
        }
    }
    if (defined > 0) report.mean_balanced_accuracy = sum / static_cast<double>(defined);
    return report;
}

}  // namespace twoway
