#include <algorithm>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "twoway/analysis.hpp"
#include "twoway/synthgen.hpp"

using namespace twoway;

namespace {

std::set<std::pair<NodeId, NodeId>> pair_set(const MultilayerNetwork& net, Layer layer) {
    std::set<std::pair<NodeId, NodeId>> out;
    for (const auto& e : net.edges(layer)) out.insert({e.src, e.dst});
    return out;
}

MultilayerNetwork two_layers(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& m,
                             const std::vector<std::pair<NodeId, NodeId>>& r,
                             const std::vector<std::pair<NodeId, NodeId>>& f = {}) {
    LayerEdges edges;
    for (auto [a, b] : m) edges[Layer::M].push_back({a, b, Layer::M, std::nullopt, 1});
    for (auto [a, b] : r) edges[Layer::R].push_back({a, b, Layer::R, std::nullopt, 1});
    for (auto [a, b] : f) edges[Layer::F].push_back({a, b, Layer::F, Sign::Positive, 1});
    return build_network(edges, n);
}

}  // namespace

TEST_SUITE("evalharness") {
    TEST_CASE("kendall tau-b basics") {
        const std::vector<std::int64_t> x{1, 2, 3, 4, 5};
        const std::vector<std::int64_t> rev{5, 4, 3, 2, 1};
        CHECK(kendall_tau_b(x, x) == doctest::Approx(1.0));
        CHECK(kendall_tau_b(x, rev) == doctest::Approx(-1.0));
        const std::vector<std::int64_t> flat{2, 2, 2, 2, 2};
        CHECK_THROWS_AS(kendall_tau_b(x, flat), UndefinedMetricError);
        CHECK_THROWS_AS(kendall_tau_b(x, std::vector<std::int64_t>{1, 2}), DomainError);
        CHECK_THROWS_AS(kendall_tau_b(std::vector<std::int64_t>{1}, std::vector<std::int64_t>{1}), DomainError);
    }

    TEST_CASE("kendall tau-b matches pair counting") {
        Rng rng(100);
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t n = 2 + rng.below(499);
            const std::uint64_t range = 1 + rng.below(40);
            std::vector<std::int64_t> x(n);
            std::vector<std::int64_t> y(n);
            for (auto& v : x) v = static_cast<std::int64_t>(rng.below(range));
            for (auto& v : y) v = static_cast<std::int64_t>(rng.below(range + 3));
            x[0] = 0;
            x[1] = 1;
            y[0] = 0;
            y[1] = 1;
            const double got = kendall_tau_b(x, y);
            CHECK(std::abs(got - oracle::kendall_tau_b(x, y)) <= 1e-12);
            CHECK(got >= -1.0);
            CHECK(got <= 1.0);
        }
    }

    TEST_CASE("degree correlation removes isolated nodes per direction") {
        // Node 4 is out-isolated in M but not in R; node 5 is isolated everywhere.
        const auto net = two_layers(6, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 0}},
                                    {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 0}, {4, 0}});
        const auto twin = two_layers(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
        CHECK(layer_degree_correlation(twin, Layer::M, Layer::R, DegreeDirection::Out) == doctest::Approx(1.0));
        CHECK_THROWS_AS(layer_degree_correlation(net, Layer::M, Layer::M, DegreeDirection::In), DomainError);

        const auto dm = layer_degrees(net, Layer::M, DegreeDirection::Out);
        const auto dr = layer_degrees(net, Layer::R, DegreeDirection::Out);
        CHECK(dm == std::vector<std::int64_t>{2, 1, 1, 1, 0, 0});
        std::vector<std::int64_t> xs;
        std::vector<std::int64_t> ys;
        for (std::size_t i = 0; i < 6; ++i) {
            if (dm[i] > 0 && dr[i] > 0) {
                xs.push_back(dm[i]);
                ys.push_back(dr[i]);
            }
        }
        CHECK(xs.size() == 4);
        CHECK(layer_degree_correlation(net, Layer::M, Layer::R, DegreeDirection::Out) ==
              doctest::Approx(oracle::kendall_tau_b(xs, ys)).epsilon(1e-12));
    }

    TEST_CASE("activity hamming") {
        const auto same = two_layers(4, {{0, 1}, {2, 3}}, {{0, 1}, {2, 3}});
        CHECK(activity_hamming(same, Layer::M, Layer::R, DegreeDirection::Out) == 0.0);
        const auto comp = two_layers(4, {{0, 1}, {2, 1}}, {{1, 0}, {3, 2}});
        CHECK(activity_hamming(comp, Layer::M, Layer::R, DegreeDirection::Out) == 1.0);

        Rng rng(7);
        for (int rep = 0; rep < 100; ++rep) {
            const std::size_t n = 5 + rng.below(496);
            const auto net = oracle::random_network(rng, n, rng.below(n), rng.below(n), rng.below(n));
            for (auto dir : {DegreeDirection::In, DegreeDirection::Out}) {
                std::vector<int> a(n, 0);
                std::vector<int> b(n, 0);
                for (const auto& e : net.edges(Layer::M)) (dir == DegreeDirection::Out ? a[e.src] : a[e.dst]) = 1;
                for (const auto& e : net.edges(Layer::F)) (dir == DegreeDirection::Out ? b[e.src] : b[e.dst]) = 1;
                double diff = 0;
                for (std::size_t i = 0; i < n; ++i) diff += a[i] != b[i];
                CHECK(std::abs(activity_hamming(net, Layer::M, Layer::F, dir) - diff / static_cast<double>(n)) <= 1e-12);
            }
        }
    }

    TEST_CASE("common edges and the overlap identity") {
        CHECK(common_edges(two_layers(4, {{0, 1}}, {{1, 0}}), Layer::M, Layer::R) == 0);
        Rng rng(13);
        for (int rep = 0; rep < 30; ++rep) {
            const auto net = oracle::random_network(rng, 40, 300, 300, 300);
            const auto f = pair_set(net, Layer::F);
            const auto m = pair_set(net, Layer::M);
            const auto r = pair_set(net, Layer::R);
            std::size_t fm = 0, fr = 0, fmr = 0, either = 0, mr = 0;
            for (const auto& p : f) {
                fm += m.count(p);
                fr += r.count(p);
                fmr += m.count(p) && r.count(p);
                either += m.count(p) || r.count(p);
            }
            for (const auto& p : m) mr += r.count(p);
            CHECK(common_edges(net, Layer::F, Layer::M) == fm);
            CHECK(common_edges(net, Layer::R, Layer::F) == fr);
            CHECK(common_edges(net, Layer::M, Layer::R) == mr);
            const auto o = f_overlap_summary(net);
            CHECK(o.f_total == f.size());
            CHECK(o.in_m == fm);
            CHECK(o.in_r == fr);
            CHECK(o.in_all == fmr);
            CHECK(o.in_either == either);
            CHECK(o.in_m + o.in_r - o.in_all == o.in_either);
            CHECK(o.in_either + o.in_neither == o.f_total);
        }
    }

    TEST_CASE("correlation report shape") {
        const auto net = generate(preset("desk")).network;
        const auto rep = correlation_report(net);
        REQUIRE(rep.pairs.size() == 3);
        CHECK(rep.pairs[0].a == Layer::M);
        CHECK(rep.pairs[0].b == Layer::R);
        CHECK(rep.pairs[2].a == Layer::R);
        CHECK(rep.pairs[2].b == Layer::F);
        for (const auto& p : rep.pairs) {
            REQUIRE(p.tau_in.has_value());
            CHECK(std::abs(*p.tau_in) <= 1.0);
            CHECK(p.hamming_out >= 0.0);
            CHECK(p.hamming_out <= 1.0);
        }
        CHECK(rep.overlap.f_total == net.edge_count(Layer::F));
    }

    TEST_CASE("embeddedness histogram") {
        const auto chain = two_layers(4, {}, {}, {{0, 1}, {1, 2}, {2, 3}});
        const auto h = embeddedness_histogram(chain);
        REQUIRE(h.bins.size() == 1);
        CHECK(h.bins[0].embeddedness == 0);
        CHECK(h.pct_of_positives(h.bins[0]) == doctest::Approx(100.0));
        CHECK_THROWS_AS(embeddedness_histogram(two_layers(3, {}, {})), DomainError);

        // Triangle: each edge has the third node as a common positive neighbor
        // once hidden.
        const auto tri = two_layers(3, {}, {}, {{0, 1}, {1, 2}, {0, 2}});
        const auto t = embeddedness_histogram(tri);
        REQUIRE(t.bins.size() == 1);
        CHECK(t.bins[0].embeddedness == 1);
        CHECK(t.bins[0].positives == 3);

        Rng rng(3);
        const auto net = oracle::random_network(rng, 60, 0, 0, 500);
        const auto r = embeddedness_histogram(net);
        std::size_t total = 0;
        for (const auto& b : r.bins) total += b.count();
        CHECK(total == 500);
        for (const auto& e : net.edges(Layer::F)) {
            const auto k = embeddedness(MaskedView(net).hiding(e.src, e.dst), e.src, e.dst);
            const auto it = std::find_if(r.bins.begin(), r.bins.end(), [&](const auto& b) { return b.embeddedness == k; });
            CHECK(it != r.bins.end());
        }
    }
}
