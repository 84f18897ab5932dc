#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "twoway/community.hpp"
#include "twoway/synthgen.hpp"

using namespace twoway;

namespace {

MultilayerNetwork layer_network(std::size_t n, Layer layer, const std::vector<std::pair<NodeId, NodeId>>& arcs,
                                std::uint32_t weight = 1) {
    LayerEdges edges;
    for (auto [a, b] : arcs) edges[layer].push_back({a, b, layer, std::nullopt, weight});
    return build_network(edges, n);
}

std::vector<std::pair<NodeId, NodeId>> two_cliques() {
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (NodeId base : {0u, 10u}) {
        for (NodeId a = 0; a < 10; ++a) {
            for (NodeId b = 0; b < 10; ++b) {
                if (a != b) arcs.emplace_back(base + a, base + b);
            }
        }
    }
    arcs.emplace_back(9, 10);
    return arcs;
}

std::vector<ClusterId> planted_halves() {
    std::vector<ClusterId> p(20, 0);
    std::fill(p.begin() + 10, p.end(), 1);
    return p;
}

// Fraction of nodes whose found cluster's majority planted label matches their own.
double agreement(const std::vector<ClusterId>& found, const std::vector<ClusterId>& planted) {
    std::map<ClusterId, std::map<ClusterId, int>> table;
    for (std::size_t i = 0; i < found.size(); ++i) ++table[found[i]][planted[i]];
    double hits = 0;
    for (const auto& [c, row] : table) {
        int best = 0;
        for (const auto& [l, n] : row) best = std::max(best, n);
        hits += best;
    }
    return hits / static_cast<double>(found.size());
}

}  // namespace

TEST_SUITE("community") {
    TEST_CASE("partition relabeling") {
        const std::vector<std::uint32_t> labels{7, 7, 3, 9, 3};
        const auto p = Partition::from_labels(Layer::R, labels);
        CHECK(p.assignment == std::vector<ClusterId>{0, 0, 1, 2, 1});
        CHECK(p.cluster_count == 3);
        CHECK_NOTHROW(p.validate(5));
        CHECK_THROWS_AS(p.validate(6), CoverageError);
        auto gap = p;
        gap.cluster_count = 4;
        CHECK_THROWS_AS(gap.validate(5), DomainError);
    }

    TEST_CASE("visit rates on simple graphs") {
        std::vector<std::pair<NodeId, NodeId>> cycle;
        for (NodeId i = 0; i < 7; ++i) cycle.emplace_back(i, (i + 1) % 7);
        const auto rates = visit_rates(layer_network(7, Layer::M, cycle), Layer::M, 0.15);
        for (double p : rates.node_rate) CHECK(p == doctest::Approx(1.0 / 7).epsilon(1e-9));

        std::vector<std::pair<NodeId, NodeId>> star;
        for (NodeId i = 1; i < 8; ++i) star.emplace_back(i, 0);
        const auto s = visit_rates(layer_network(8, Layer::R, star), Layer::R, 0.15);
        for (NodeId i = 1; i < 8; ++i) CHECK(s.node_rate[0] > s.node_rate[i]);
        CHECK(std::accumulate(s.node_rate.begin(), s.node_rate.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));

        CHECK_THROWS_AS(visit_rates(layer_network(3, Layer::M, {}), Layer::M, 0.0), DomainError);
        CHECK_THROWS_AS(visit_rates(layer_network(3, Layer::M, {}), Layer::F, 0.15), DomainError);
    }

    TEST_CASE("visit rates match dense power iteration") {
        Rng rng(21);
        for (int rep = 0; rep < 5; ++rep) {
            const auto net = oracle::random_network(rng, 30, 70, 40, 0);
            for (Layer layer : {Layer::M, Layer::R}) {
                const auto g = layer_digraph(net, layer);
                const auto rates = visit_rates(g, 0.15);
                const auto p = oracle::stationary(oracle::google_matrix(g, 0.15));
                double sum = 0.0;
                for (std::size_t i = 0; i < 30; ++i) {
                    CHECK(std::abs(rates.node_rate[i] - p[i]) <= 1e-8);
                    sum += rates.node_rate[i];
                }
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            }
        }
    }

    TEST_CASE("map equation degenerate cases") {
        std::vector<std::pair<NodeId, NodeId>> cycle;
        for (NodeId i = 0; i < 12; ++i) cycle.emplace_back(i, (i + 1) % 12);
        const auto g = layer_digraph(layer_network(12, Layer::M, cycle), Layer::M);
        const auto rates = visit_rates(g, 0.15);
        const std::vector<ClusterId> one(12, 0);
        std::vector<ClusterId> singles(12);
        std::iota(singles.begin(), singles.end(), 0u);
        double entropy = 0.0;
        for (double p : rates.node_rate) entropy -= p * std::log2(p);
        CHECK(map_equation(g, rates, one) == doctest::Approx(entropy).epsilon(1e-12));
        CHECK(map_equation(g, rates, singles) >= map_equation(g, rates, one));
    }

    TEST_CASE("map equation matches the definition-direct oracle") {
        Rng rng(8);
        for (int rep = 0; rep < 20; ++rep) {
            const std::size_t n = 5 + rng.below(46);
            const auto net = oracle::random_network(rng, n, 3 * n, n, 0);
            const auto g = layer_digraph(net, Layer::M);
            const auto G = oracle::google_matrix(g, 0.15);
            const auto p = oracle::stationary(G);
            const auto rates = visit_rates(g, 0.15);
            for (std::size_t k : {std::size_t{1}, std::size_t{3}, n}) {
                const auto part = oracle::random_partition(rng, Layer::M, n, k);
                CHECK(std::abs(map_equation(g, rates, part.assignment) -
                               oracle::map_equation(G, p, part.assignment)) <= 1e-9);
            }
        }
    }

    TEST_CASE("two cliques") {
        const auto net = layer_network(20, Layer::R, two_cliques());
        const auto g = layer_digraph(net, Layer::R);
        const auto G = oracle::google_matrix(g, 0.15);
        const auto p = oracle::stationary(G);
        const std::vector<ClusterId> one(20, 0);
        CHECK(oracle::map_equation(G, p, planted_halves()) < oracle::map_equation(G, p, one));

        for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
            InfomapOptions opts;
            opts.seed = seed;
            const auto res = run_infomap(net, Layer::R, opts);
            CHECK(res.partition.assignment == planted_halves());
            CHECK(res.final_codelength <= oracle::map_equation(G, p, planted_halves()) + 1e-9);
            for (std::size_t i = 1; i < res.trace.size(); ++i) CHECK(res.trace[i] <= res.trace[i - 1]);
        }
    }

    TEST_CASE("empty layer stays singletons") {
        const auto net = layer_network(6, Layer::M, {});
        const auto res = run_infomap(net, Layer::M, {});
        CHECK(res.partition == Partition::singletons(Layer::M, 6));
        CHECK(res.final_codelength == doctest::Approx(res.initial_codelength));
    }

    TEST_CASE("isolated nodes are retained as singletons") {
        auto arcs = two_cliques();
        const auto net = layer_network(23, Layer::R, arcs);
        const auto p = cluster_layer(net, Layer::R, 0.15, 3);
        CHECK(p.cluster_count == 5);
        CHECK(p.assignment[20] != p.assignment[21]);
    }

    TEST_CASE("deterministic and permutation equivariant") {
        Rng rng(77);
        const auto base = generate([] {
            GenConfig cfg;
            cfg.node_count = 200;
            cfg.r = {4, 0.15, 0.01};
            cfg.m = {4, 0.1, 0.01};
            cfg.f_edge_count = 10;
            cfg.seed = 5;
            return cfg;
        }()).network;
        InfomapOptions opts;
        opts.seed = 9;
        const auto a = run_infomap(base, Layer::R, opts);
        const auto b = run_infomap(base, Layer::R, opts);
        CHECK(a.partition == b.partition);
        CHECK(a.trace == b.trace);
        for (std::size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i] <= a.trace[i - 1] + 1e-12);
        CHECK(a.final_codelength <= a.initial_codelength);

        std::vector<NodeId> perm(200);
        std::iota(perm.begin(), perm.end(), 0u);
        rng.shuffle(std::span<NodeId>(perm));
        std::vector<NodeId> rank(200);
        for (NodeId i = 0; i < 200; ++i) rank[i] = i;
        rng.shuffle(std::span<NodeId>(rank));

        LayerEdges moved;
        for (Layer l : {Layer::R}) {
            for (const auto& e : base.edges(l)) moved[l].push_back({perm[e.src], perm[e.dst], l, e.sign, e.weight});
        }
        const auto permuted = build_network(moved, 200);
        InfomapOptions o1;
        o1.node_rank = rank;
        InfomapOptions o2;
        o2.node_rank = std::vector<NodeId>(200);
        for (NodeId v = 0; v < 200; ++v) (*o2.node_rank)[perm[v]] = rank[v];
        const auto p1 = run_infomap(base, Layer::R, o1).partition;
        const auto p2 = run_infomap(permuted, Layer::R, o2).partition;
        for (NodeId u = 0; u < 200; ++u) {
            for (NodeId v = u + 1; v < 200; ++v) {
                CHECK((p1.assignment[u] == p1.assignment[v]) == (p2.assignment[perm[u]] == p2.assignment[perm[v]]));
            }
        }
    }

    TEST_CASE("planted partition is recovered") {
        GenConfig cfg;
        cfg.node_count = 800;
        cfg.r = {4, 0.04, 0.002};
        cfg.m = {4, 0.04, 0.002};
        cfg.f_edge_count = 100;
        cfg.seed = 12;
        const auto s = generate(cfg);
        const auto r = cluster_layer(s.network, Layer::R, 0.15, 1);
        const auto m = cluster_layer(s.network, Layer::M, 0.15, 1);
        CHECK(agreement(r.assignment, s.truth.membership_r) >= 0.9);
        CHECK(agreement(m.assignment, s.truth.membership_m) >= 0.9);
        CHECK(r.cluster_count <= 8);
    }

    TEST_CASE("connected components") {
        const auto net = layer_network(6, Layer::M, {{0, 1}, {2, 1}, {4, 5}});
        const auto p = connected_components(net, Layer::M);
        CHECK(p.assignment == std::vector<ClusterId>{0, 0, 0, 1, 2, 2});
        CHECK(components_clusterer()(net, Layer::M) == p);
        CHECK(infomap_clusterer(0.15, 0)(net, Layer::M).assignment.size() == 6);
    }

    TEST_CASE("augmented network") {
        const auto net = layer_network(3, Layer::M, {{0, 1}});
        const auto one_r = Partition::from_labels(Layer::R, std::vector<std::uint32_t>{0, 0, 0});
        const auto one_m = Partition::from_labels(Layer::M, std::vector<std::uint32_t>{0, 0, 0});
        const auto aug = augment(net, one_r, one_m);
        const auto members = aug.members(Layer::R, 0);
        CHECK(std::vector<NodeId>(members.begin(), members.end()) == std::vector<NodeId>{0, 1, 2});
        CHECK_THROWS_AS(augment(net, one_m, one_r), DomainError);
        CHECK_THROWS_AS(augment(net, Partition::singletons(Layer::R, 2), one_m), CoverageError);
        CHECK_THROWS_AS(aug.members(Layer::R, 1), BoundsError);

        // Three clusters, each cluster node linked to its members.
        const auto toy = layer_network(7, Layer::R, {{0, 1}, {2, 3}});
        const std::vector<std::uint32_t> c3{0, 0, 1, 1, 1, 2, 2};
        const auto t = augment(toy, Partition::from_labels(Layer::R, c3),
                               Partition::from_labels(Layer::M, c3));
        CHECK(t.cluster_count(Layer::R) == 3);
        CHECK(t.members(Layer::M, 1).size() == 3);

        Rng rng(4);
        const auto g = oracle::random_network(rng, 120, 300, 300, 100);
        const auto pr = oracle::random_partition(rng, Layer::R, 120, 9);
        const auto pm = oracle::random_partition(rng, Layer::M, 120, 13);
        const auto a2 = augment(g, pr, pm);
        for (Layer src : {Layer::R, Layer::M}) {
            std::size_t total = 0;
            for (ClusterId c = 0; c < a2.cluster_count(src); ++c) {
                const auto ms = a2.members(src, c);
                total += ms.size();
                CHECK(std::is_sorted(ms.begin(), ms.end()));
                for (NodeId v : ms) CHECK(a2.cluster_of(src, v) == c);
            }
            CHECK(total == 120);
        }
        for (NodeId v = 0; v < 120; ++v) {
            const auto step = RelationStep::forward(Layer::M);
            const auto x = a2.neighbors(v, step);
            const auto y = g.neighbors(v, step);
            CHECK(std::equal(x.begin(), x.end(), y.begin(), y.end()));
        }
    }
}
