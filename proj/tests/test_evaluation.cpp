#include <algorithm>
#include <mutex>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "twoway/evaluation.hpp"
#include "twoway/synthgen.hpp"

using namespace twoway;

namespace {

std::vector<SignedEdge> chain_edges(std::size_t count) {
    std::vector<SignedEdge> edges;
    for (std::size_t i = 0; i < count; ++i) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), Layer::F,
                         i % 3 ? Sign::Positive : Sign::Negative, 1});
    }
    return edges;
}

SyntheticNetwork small_world(std::uint64_t seed, double alpha = 0.0) {
    GenConfig cfg;
    cfg.node_count = 300;
    cfg.r = {4, 0.06, 0.004};
    cfg.m = {4, 0.05, 0.004};
    cfg.f_edge_count = 900;
    cfg.f_locality = 0.3;
    cfg.f_closure = 0.2;
    cfg.sign = {alpha, 2.0, 0.3};
    cfg.seed = seed;
    return generate(cfg);
}

bool same_report(const EvalReport& a, const EvalReport& b) {
    if (a.folds.size() != b.folds.size() || a.mean_balanced_accuracy != b.mean_balanced_accuracy) return false;
    for (std::size_t i = 0; i < a.folds.size(); ++i) {
        if (a.folds[i].confusion != b.folds[i].confusion || a.folds[i].fold != b.folds[i].fold) return false;
    }
    return a.warnings == b.warnings;
}

}  // namespace

TEST_SUITE("evalharness") {
    TEST_CASE("kfold sizes") {
        const auto ten = kfold_split(chain_edges(10), 10, 1);
        for (const auto& f : ten.folds) CHECK(f.size() == 1);

        const auto plan = kfold_split(chain_edges(103), 10, 4);
        REQUIRE(plan.folds.size() == 10);
        for (std::size_t i = 0; i < 10; ++i) CHECK(plan.folds[i].size() == (i < 3 ? 11u : 10u));

        CHECK_THROWS_AS(kfold_split(chain_edges(5), 10, 0), DomainError);
        CHECK_THROWS_AS(kfold_split(chain_edges(5), 1, 0), DomainError);
    }

    TEST_CASE("folds partition the edges") {
        Rng rng(9);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 10 + rng.below(500);
            const std::size_t k = 2 + rng.below(9);
            const auto edges = chain_edges(n);
            const auto plan = kfold_split(edges, k, rng.next());
            std::set<std::pair<NodeId, NodeId>> seen;
            std::size_t total = 0;
            std::size_t lo = n;
            std::size_t hi = 0;
            for (const auto& f : plan.folds) {
                total += f.size();
                lo = std::min(lo, f.size());
                hi = std::max(hi, f.size());
                for (const auto& e : f) seen.insert({e.src, e.dst});
            }
            CHECK(total == n);
            CHECK(seen.size() == n);
            CHECK(hi - lo <= 1);
            const auto again = kfold_split(edges, k, plan.seed);
            CHECK(again.folds == plan.folds);
        }
    }

    TEST_CASE("balanced accuracy arithmetic") {
        Confusion perfect;
        for (int i = 0; i < 4; ++i) perfect.add(Sign::Positive, Sign::Positive);
        perfect.add(Sign::Negative, Sign::Negative);
        CHECK(balanced_accuracy(perfect) == 1.0);

        Confusion c{9, 1, 5, 5};
        CHECK(balanced_accuracy(c) == doctest::Approx(0.7));

        Confusion all_pos;
        for (int i = 0; i < 7; ++i) all_pos.add(Sign::Positive, Sign::Positive);
        for (int i = 0; i < 3; ++i) all_pos.add(Sign::Negative, Sign::Positive);
        CHECK(balanced_accuracy(all_pos) == doctest::Approx(0.5));
        CHECK(all_pos.fp == 3);

        CHECK_THROWS_AS(balanced_accuracy(Confusion{3, 1, 0, 0}), UndefinedMetricError);
    }

    TEST_CASE("predictor names") {
        CHECK(parse_predictor("cbmp") == PredictorKind::CbMp);
        CHECK(parse_predictor("NB-MP") == PredictorKind::NbMp);
        CHECK(parse_predictor("nbsn") == PredictorKind::NbSp);
        CHECK(to_string(PredictorKind::Mf) == "MF");
        CHECK(parse_predictor_list("cbmp,nbmp,nbsp,mf,random").size() == 5);
        CHECK_THROWS_AS(parse_predictor("svm"), DomainError);
        CHECK(fold_seed(7, 0) != fold_seed(7, 1));
        CHECK(fold_seed(7, 3) == fold_seed(7, 3));
    }

    TEST_CASE("confusion bookkeeping") {
        const auto s = small_world(3);
        const auto parts = std::pair{cluster_layer(s.network, Layer::R, 0.15, 3),
                                     cluster_layer(s.network, Layer::M, 0.15, 3)};
        const auto aug = augment(s.network, parts.first, parts.second);
        const auto plan = kfold_split(s.network.edges(Layer::F), 10, 3);
        for (auto kind : {PredictorKind::CbMp, PredictorKind::NbSp, PredictorKind::Mf, PredictorKind::Random}) {
            const auto report = run_experiment(aug, kind, plan, {});
            REQUIRE(report.folds.size() == 10);
            for (std::size_t f = 0; f < 10; ++f) {
                const auto& fr = report.folds[f];
                std::uint64_t pos = 0;
                for (const auto& e : plan.folds[f]) pos += *e.sign == Sign::Positive;
                CHECK(fr.fold == f);
                CHECK(fr.test_size == plan.folds[f].size());
                CHECK(fr.train_size + fr.test_size == s.network.edge_count(Layer::F));
                CHECK(fr.confusion.tp + fr.confusion.fn == pos);
                CHECK(fr.confusion.tn + fr.confusion.fp == plan.folds[f].size() - pos);
            }
            REQUIRE(report.mean_balanced_accuracy.has_value());
            CHECK(*report.mean_balanced_accuracy >= 0.0);
            CHECK(*report.mean_balanced_accuracy <= 1.0);
        }
    }

    TEST_CASE("all-positive F layer warns on every fold") {
        Rng rng(2);
        const auto net = oracle::random_network(rng, 80, 200, 200, 300, 1.0);
        const auto aug = augment(net, Partition::singletons(Layer::R, 80), Partition::singletons(Layer::M, 80));
        const auto plan = kfold_split(net.edges(Layer::F), 10, 1);
        for (auto kind : {PredictorKind::CbMp, PredictorKind::Mf, PredictorKind::Random}) {
            const auto report = run_experiment(aug, kind, plan, {});
            CHECK_FALSE(report.mean_balanced_accuracy.has_value());
            for (const auto& f : report.folds) {
                CHECK_FALSE(f.balanced_accuracy.has_value());
                CHECK_FALSE(f.warning.empty());
            }
            CHECK(report.warnings.size() >= 10);
        }
    }

    TEST_CASE("random predictor on the desk preset") {
        const auto s = generate(preset("desk"));
        const auto n = s.network.node_count();
        const auto aug = augment(s.network, Partition::singletons(Layer::R, n), Partition::singletons(Layer::M, n));
        ExperimentConfig cfg;
        cfg.seed = 7;
        const auto report = run_experiment(aug, PredictorKind::Random, kfold_split(s.network.edges(Layer::F), 10, 7), cfg);
        REQUIRE(report.mean_balanced_accuracy.has_value());
        CHECK(std::abs(*report.mean_balanced_accuracy - 0.5) <= 0.03);
    }

    TEST_CASE("results do not depend on the thread count") {
        const auto s = small_world(5, 0.5);
        const auto aug = augment(s.network, cluster_layer(s.network, Layer::R, 0.15, 1),
                                 cluster_layer(s.network, Layer::M, 0.15, 1));
        const auto plan = kfold_split(s.network.edges(Layer::F), 5, 8);
        for (auto kind : {PredictorKind::CbMp, PredictorKind::NbMp, PredictorKind::Mf, PredictorKind::Random}) {
            ExperimentConfig one;
            one.seed = 3;
            auto four = one;
            four.threads = 4;
            const auto a = run_experiment(aug, kind, plan, one);
            CHECK(same_report(a, run_experiment(aug, kind, plan, four)));
            CHECK(same_report(a, run_experiment(aug, kind, plan, one)));
        }
    }

    TEST_CASE("featurization always goes through the masked view") {
        const auto s = small_world(6);
        const auto aug = augment(s.network, cluster_layer(s.network, Layer::R, 0.15, 1),
                                 cluster_layer(s.network, Layer::M, 0.15, 1));
        const auto plan = kfold_split(s.network.edges(Layer::F), 4, 2);
        std::mutex mu;
        std::size_t calls = 0;
        std::size_t violations = 0;
        ExperimentConfig cfg;
        cfg.threads = 2;
        cfg.on_featurize = [&](std::size_t fold, const MaskedView& view, NodeId u, NodeId v) {
            bool ok = &view.base() == &s.network;
            if (s.network.f_sign(u, v)) ok = ok && view.is_hidden(u, v);
            for (const auto& e : plan.folds[fold]) ok = ok && view.is_hidden(e.src, e.dst);
            std::lock_guard lock(mu);
            ++calls;
            violations += !ok;
        };
        for (auto kind : {PredictorKind::CbMp, PredictorKind::NbSp}) run_experiment(aug, kind, plan, cfg);
        CHECK(calls == 2 * 4 * s.network.edge_count(Layer::F));
        CHECK(violations == 0);
    }

    TEST_CASE("fitted predictor margins") {
        const auto s = small_world(4);
        const auto aug = augment(s.network, Partition::singletons(Layer::R, 300), Partition::singletons(Layer::M, 300));
        const MaskedView view(s.network);
        const auto& train = s.network.edges(Layer::F);
        const auto mf = fit_predictor(PredictorKind::Mf, aug, view, train, {}, 5);
        PathCounter counter(aug);
        CHECK(predictor_margin(mf, counter, view, 3, 9) == mf.mf.margin(3, 9));
        const auto nb = fit_predictor(PredictorKind::NbMp, aug, view, train, {}, 5);
        CHECK(nb.columns == feature_columns(FeatureMode::NB));
        const auto x = pair_features(PredictorKind::NbMp, counter, view, 3, 9);
        CHECK(predictor_margin(nb, counter, view, 3, 9) == doctest::Approx(nb.svm.margin(nb.standardizer.transform(x))));
        CHECK_THROWS(fit_predictor(PredictorKind::Random, aug, view, train, {}, 5));
        CHECK(feature_mode(PredictorKind::CbMp) == FeatureMode::CB);
    }
}
