#include "twoway/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "twoway/rng.hpp"

namespace twoway {
namespace {

// Full-scale layer sizes; the desk preset keeps their ratios.
constexpr std::size_t kFullNodes = 44124;
constexpr std::size_t kFullF = 182598;
constexpr std::size_t kFullM = 1354606;
constexpr std::size_t kFullR = 1448620;

constexpr std::size_t kDeskNodes = 2000;
constexpr std::size_t kDeskF = 8000;

std::vector<std::vector<NodeId>> members_by_cluster(const std::vector<ClusterId>& membership,
                                                    std::size_t clusters) {
    std::vector<std::vector<NodeId>> members(clusters);
    for (NodeId v = 0; v < membership.size(); ++v) members[membership[v]].push_back(v);
    return members;
}

void sample_planted_arcs(Rng& rng, const std::vector<ClusterId>& membership,
                         const std::vector<std::vector<NodeId>>& members,
                         const SourceLayerConfig& layer_cfg, Layer layer,
                         std::vector<SignedEdge>& out) {
    const auto n = static_cast<NodeId>(membership.size());
    for (NodeId src = 0; src < n; ++src) {
        for (ClusterId c = 0; c < members.size(); ++c) {
            const double p = c == membership[src] ? layer_cfg.p_in : layer_cfg.p_out;
            const auto& targets = members[c];
            if (p <= 0.0 || targets.empty()) continue;
            if (p >= 1.0) {
                for (NodeId dst : targets) {
                    if (dst != src) out.push_back({src, dst, layer, std::nullopt, 1});
                }
                continue;
            }
            const double log_q = std::log1p(-p);
            std::size_t pos = 0;
            bool first = true;
            while (true) {
                const double skip = std::floor(std::log1p(-rng.uniform()) / log_q);
                const double next = static_cast<double>(pos) + skip + (first ? 0.0 : 1.0);
                if (next >= static_cast<double>(targets.size())) break;
                pos = static_cast<std::size_t>(next);
                first = false;
                if (targets[pos] != src) out.push_back({src, targets[pos], layer, std::nullopt, 1});
            }
        }
    }
}

void insert_sorted(std::vector<NodeId>& list, NodeId v) {
    const auto it = std::lower_bound(list.begin(), list.end(), v);
    if (it == list.end() || *it != v) list.insert(it, v);
}

std::uint32_t sorted_intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
    std::uint32_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

// p_in / p_out giving `target` expected arcs with `within` of them inside
// clusters, for k balanced clusters.
SourceLayerConfig planted_for_target(std::size_t n, std::size_t k, std::size_t target,
                                     double within) {
    const double size = static_cast<double>(n) / static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double within_pairs = nn * (size - 1.0);
    const double between_pairs = nn * (nn - size);
    SourceLayerConfig cfg;
    cfg.clusters = k;
    cfg.p_in = within * static_cast<double>(target) / within_pairs;
    cfg.p_out = (1.0 - within) * static_cast<double>(target) / between_pairs;
    return cfg;
}

std::size_t scaled(std::size_t f, std::size_t full_layer) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(f) *
                                                 static_cast<double>(full_layer) /
                                                 static_cast<double>(kFullF)));
}

}  // namespace

double logistic(double x) noexcept {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void GenConfig::validate() const {
    const auto fail = [](const std::string& what) { throw DomainError("synthgen", what); };
    if (node_count < 2) fail("node_count must be at least 2");
    for (const auto* layer : {&r, &m}) {
        if (layer->clusters == 0 || layer->clusters > node_count) {
            fail("cluster count must be in [1, node_count]");
        }
        if (!(0.0 <= layer->p_out && layer->p_out <= layer->p_in && layer->p_in <= 1.0)) {
            fail("planted probabilities must satisfy 0 <= p_out <= p_in <= 1");
        }
    }
    if (!(0.0 <= membership_correlation && membership_correlation <= 1.0)) {
        fail("membership_correlation must lie in [0, 1]");
    }
    if (!(0.0 <= f_locality && 0.0 <= f_closure && f_locality + f_closure <= 1.0)) {
        fail("f_locality and f_closure must be non-negative with sum <= 1");
    }
    for (double x : {sign.alpha, sign.beta_cluster, sign.beta_embed}) {
        if (!std::isfinite(x)) fail("sign model coefficients must be finite");
    }
    const auto n = static_cast<long double>(node_count);
    if (static_cast<long double>(f_edge_count) > n * (n - 1)) {
        throw CapacityError("synthgen", "f_edge_count " + std::to_string(f_edge_count) +
                                            " exceeds the " + std::to_string(node_count) +
                                            "-node capacity of ordered pairs");
    }
}

SyntheticNetwork generate(const GenConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    const std::size_t n = cfg.node_count;
    GroundTruth truth;

    truth.membership_r.resize(n);
    for (std::size_t i = 0; i < n; ++i) truth.membership_r[i] = static_cast<ClusterId>(i % cfg.r.clusters);
    rng.shuffle(std::span<ClusterId>(truth.membership_r));

    truth.membership_m.resize(n);
    const auto km = cfg.m.clusters;
    for (std::size_t i = 0; i < n; ++i) {
        const auto copied = static_cast<ClusterId>(truth.membership_r[i] % km);
        if (rng.uniform() < cfg.membership_correlation || km == 1) {
            truth.membership_m[i] = copied;
        } else {
            auto other = static_cast<ClusterId>(rng.below(km - 1));
            if (other >= copied) ++other;
            truth.membership_m[i] = other;
        }
    }

    const auto members_r = members_by_cluster(truth.membership_r, cfg.r.clusters);
    const auto members_m = members_by_cluster(truth.membership_m, cfg.m.clusters);

    LayerEdges edges;
    sample_planted_arcs(rng, truth.membership_r, members_r, cfg.r, Layer::R, edges[Layer::R]);
    sample_planted_arcs(rng, truth.membership_m, members_m, cfg.m, Layer::M, edges[Layer::M]);

    std::vector<std::vector<NodeId>> positive(n);
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(cfg.f_edge_count * 2);
    truth.f_edges.reserve(cfg.f_edge_count);
    constexpr std::size_t kMaxStructuredAttempts = 1000;

    for (std::size_t e = 0; e < cfg.f_edge_count; ++e) {
        NodeId u = 0;
        NodeId v = 0;
        for (std::size_t attempt = 0;; ++attempt) {
            u = static_cast<NodeId>(rng.below(n));
            const double mode = attempt < kMaxStructuredAttempts ? rng.uniform() : 1.0;
            if (mode < cfg.f_closure) {
                const auto& first = positive[u];
                if (first.empty()) continue;
                const auto& second = positive[first[rng.below(first.size())]];
                v = second[rng.below(second.size())];
            } else if (mode < cfg.f_closure + cfg.f_locality) {
                const auto& mates = members_r[truth.membership_r[u]];
                v = mates[rng.below(mates.size())];
            } else {
                v = static_cast<NodeId>(rng.below(n));
            }
            if (v != u && !taken.contains(edge_key(u, v))) break;
        }
        taken.insert(edge_key(u, v));

        FEdgeRecord rec;
        rec.src = u;
        rec.dst = v;
        rec.same_cluster = truth.membership_r[u] == truth.membership_r[v];
        rec.embeddedness = sorted_intersection_size(positive[u], positive[v]);
        rec.p_positive = logistic(cfg.sign.alpha + cfg.sign.beta_cluster * (rec.same_cluster ? 1.0 : 0.0) +
                                  cfg.sign.beta_embed * static_cast<double>(rec.embeddedness));
        rec.sign = rng.uniform() < rec.p_positive ? Sign::Positive : Sign::Negative;
        if (rec.sign == Sign::Positive) {
            insert_sorted(positive[u], v);
            insert_sorted(positive[v], u);
        }
        edges[Layer::F].push_back({u, v, Layer::F, rec.sign, 1});
        truth.f_edges.push_back(rec);
    }

    return {build_network(edges, n), std::move(truth)};
}

EdgeTargets preset_targets(std::string_view name) {
    if (name == "paper-scale") return {kFullF, kFullM, kFullR};
    if (name == "desk") return {kDeskF, scaled(kDeskF, kFullM), scaled(kDeskF, kFullR)};
    throw DomainError("synthgen", "unknown preset '" + std::string(name) + "'");
}

GenConfig preset(std::string_view name) {
    const auto targets = preset_targets(name);
    GenConfig cfg;
    if (name == "desk") {
        cfg.node_count = kDeskNodes;
        cfg.r = planted_for_target(kDeskNodes, 20, targets.r, 0.8);
        cfg.m = planted_for_target(kDeskNodes, 20, targets.m, 0.8);
        cfg.membership_correlation = 0.8;
        cfg.f_edge_count = targets.f;
        cfg.f_locality = 0.3;
        cfg.f_closure = 0.2;
        cfg.sign = {-1.0, 3.0, 0.4};
        cfg.seed = 7;
    } else {
        cfg.node_count = kFullNodes;
        cfg.r = planted_for_target(kFullNodes, 48, targets.r, 0.8);
        cfg.m = planted_for_target(kFullNodes, 48, targets.m, 0.8);
        cfg.membership_correlation = 0.8;
        cfg.f_edge_count = targets.f;
        cfg.f_locality = 0.3;
        cfg.f_closure = 0.2;
        cfg.sign = {-1.0, 3.0, 0.4};
        cfg.seed = 7;
    }
    return cfg;
}

}  // namespace twoway
