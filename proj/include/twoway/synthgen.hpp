#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "twoway/network.hpp"

namespace twoway {

/// Planted-partition parameters of one source layer (M or R).
struct SourceLayerConfig {
    std::size_t clusters = 4;
    double p_in = 0.02;   // within-cluster arc probability
    double p_out = 0.001; // between-cluster arc probability
};

/// P(+) = logistic(alpha + beta_cluster * [same R cluster] + beta_embed * embeddedness)
struct SignModel {
    double alpha = 0.0;
    double beta_cluster = 0.0;
    double beta_embed = 0.0;
};

struct GenConfig {
    std::size_t node_count = 2000;
    SourceLayerConfig r;
    SourceLayerConfig m;
    /// Probability that a node's M cluster index equals its R cluster index.
    double membership_correlation = 0.8;
    std::size_t f_edge_count = 8000;
    /// Probability an initiation targets a member of the initiator's R cluster.
    double f_locality = 0.0;
    /// Probability an initiation targets a positive two-hop F neighbor.
    double f_closure = 0.0;
    SignModel sign;
    std::uint64_t seed = 0;

    /// Throws DomainError (bad parameter) or CapacityError (too many F edges).
    void validate() const;
};

/// Emitted once per F edge, in generation order.
struct FEdgeRecord {
    NodeId src = 0;
    NodeId dst = 0;
    bool same_cluster = false;       // same R cluster
    std::uint32_t embeddedness = 0;  // at the moment the edge was drawn
    double p_positive = 0.0;
    Sign sign = Sign::Positive;
};

struct GroundTruth {
    std::vector<ClusterId> membership_r;
    std::vector<ClusterId> membership_m;
    std::vector<FEdgeRecord> f_edges;
};

struct SyntheticNetwork {
    MultilayerNetwork network;
    GroundTruth truth;
};

double logistic(double x) noexcept;

/// Deterministic in `cfg` (including the seed). All randomness comes from one
/// Rng stream drawn in this order:
///   1. R memberships: balanced labels (node i gets i mod k_R), shuffled.
///   2. M memberships: per node, one uniform; below the correlation the R
///      index (mod k_M) is copied, otherwise one draw picks another cluster.
///   3. R arcs, then M arcs: per source node, per target cluster in
///      ascending order, geometric skips over that cluster's sorted members.
///   4. F edges: per edge, draw initiator, mode uniform, recipient (retrying
///      on self-pairs and duplicates), then one uniform for the sign. The
///      embeddedness term sees only previously drawn positive edges.
SyntheticNetwork generate(const GenConfig& cfg);

/// "desk" (2000 nodes) or "paper-scale" (44124 nodes). Throws DomainError
/// on an unknown name.
GenConfig preset(std::string_view name);

/// Layer sizes the preset aims for.
struct EdgeTargets {
    std::size_t f = 0;
    std::size_t m = 0;
    std::size_t r = 0;
};
EdgeTargets preset_targets(std::string_view name);

}  // namespace twoway
