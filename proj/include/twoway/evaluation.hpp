#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "twoway/community.hpp"
#include "twoway/metapath.hpp"
#include "twoway/network.hpp"
#include "twoway/predictors.hpp"

namespace twoway {

/// +1 is the "positive" class.
struct Confusion {
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;

    void add(Sign truth, Sign predicted);
    std::uint64_t total() const noexcept { return tp + fn + tn + fp; }

    friend bool operator==(const Confusion&, const Confusion&) = default;
};

/// Mean of the two per-class true-positive rates. Throws
/// UndefinedMetricError when a class is absent.
double balanced_accuracy(const Confusion& c);

struct FoldPlan {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<SignedEdge>> folds;
};

/// Seeded shuffle, then contiguous slices; the first |edges| mod k folds get
/// one extra edge. Throws DomainError when k < 2 or there are fewer edges than folds.
FoldPlan kfold_split(std::span<const SignedEdge> f_edges, std::size_t k, std::uint64_t seed);

enum class PredictorKind : std::uint8_t { CbMp, NbMp, NbSp, Mf, Random };

std::string_view to_string(PredictorKind kind) noexcept;
/// Accepts the display name ("CB-MP") or the flag form ("cbmp").
PredictorKind parse_predictor(std::string_view name);
std::vector<PredictorKind> parse_predictor_list(std::string_view csv);

struct ExperimentConfig {
    SvmParams svm;
    MfParams mf;
    /// Base seed of the per-fold model seeds.
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    /// Called for every featurized pair with the view used. Must be thread-safe
    /// when threads > 1.
    std::function<void(std::size_t fold, const MaskedView&, NodeId, NodeId)> on_featurize;
};

struct FoldResult {
    std::size_t fold = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    Confusion confusion;
    std::optional<double> balanced_accuracy;
    std::string warning;
};

struct EvalReport {
    PredictorKind predictor = PredictorKind::Random;
    std::size_t k = 0;
    std::uint64_t fold_seed = 0;
    ExperimentConfig config;
    std::vector<FoldResult> folds;
    /// Over folds with a defined metric; empty when there are none.
    std::optional<double> mean_balanced_accuracy;
    std::vector<std::string> warnings;
};

/// A predictor fitted on a set of labeled F edges.
struct FittedPredictor {
    PredictorKind kind = PredictorKind::CbMp;
    std::vector<std::string> columns;
    Standardizer standardizer;
    LinearModel svm;
    MfModel mf;
};

FeatureMode feature_mode(PredictorKind kind);

/// Raw feature vector of pair (u, v) for a feature-based predictor, always
/// computed with (u, v) hidden on top of `view`.
std::vector<double> pair_features(PredictorKind kind, PathCounter& counter, const MaskedView& view,
                                  NodeId u, NodeId v);

/// Fits on `train` (edges visible or hidden in `view`); each training pair is
/// featurized with its own edge hidden. Not defined for Random.
FittedPredictor fit_predictor(PredictorKind kind, const AugmentedNetwork& net, const MaskedView& view,
                              std::span<const SignedEdge> train, const ExperimentConfig& config,
                              std::uint64_t seed, std::size_t fold = 0);

/// Decision margin of a fitted predictor; >= 0 predicts +1.
double predictor_margin(const FittedPredictor& model, PathCounter& counter, const MaskedView& view,
                        NodeId u, NodeId v);

/// Per fold: hide the fold's F edges, fit on the rest, score the fold.
/// Folds may run concurrently; results do not depend on `threads`.
EvalReport run_experiment(const AugmentedNetwork& net, PredictorKind kind, const FoldPlan& plan,
                          const ExperimentConfig& config);

/// Seed of the model trained on a given fold.
std::uint64_t fold_seed(std::uint64_t base, std::size_t fold) noexcept;

}  // namespace twoway
