#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "twoway/network.hpp"

namespace twoway {

/// Node -> cluster assignment for one source layer. Ids are dense and every
/// cluster is non-empty.
struct Partition {
    Layer layer = Layer::R;
    std::vector<ClusterId> assignment;
    std::size_t cluster_count = 0;

    /// Relabels arbitrary labels to dense ids ordered by smallest member.
    static Partition from_labels(Layer layer, std::span<const std::uint32_t> labels);
    static Partition singletons(Layer layer, std::size_t node_count);

    /// Throws CoverageError / DomainError on a malformed partition.
    void validate(std::size_t node_count) const;

    friend bool operator==(const Partition&, const Partition&) = default;
};

/// Directed weighted graph in CSR form, both directions.
struct WeightedDigraph {
    std::size_t node_count = 0;
    std::vector<std::size_t> out_offsets{0};
    std::vector<NodeId> out_targets;
    std::vector<double> out_weights;
    std::vector<std::size_t> in_offsets{0};
    std::vector<NodeId> in_sources;
    std::vector<double> in_weights;
    std::vector<double> out_strength;

    static WeightedDigraph from_arcs(std::size_t node_count,
                                     std::span<const std::tuple<NodeId, NodeId, double>> arcs);
};

/// Arc weights are the merged edge multiplicities.
WeightedDigraph layer_digraph(const MultilayerNetwork& net, Layer layer);

struct VisitRates {
    double teleport = 0.15;
    std::vector<double> node_rate;
    /// Flow along each out-arc, aligned with WeightedDigraph::out_targets.
    std::vector<double> edge_flow;
    /// Flow each node sends through teleportation (all of it for dangling nodes).
    std::vector<double> teleport_flow;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/// Stationary distribution of the weight-proportional walk that teleports
/// uniformly with probability `teleport` (always, from dangling nodes).
/// Power iteration until the L1 change drops below 1e-10 or 10^4 steps.
VisitRates visit_rates(const WeightedDigraph& graph, double teleport);
VisitRates visit_rates(const MultilayerNetwork& net, Layer layer, double teleport);

/// Two-level map equation in bits.
double map_equation(const WeightedDigraph& graph, const VisitRates& rates,
                    std::span<const ClusterId> assignment);
double map_equation(const MultilayerNetwork& net, Layer layer, const VisitRates& rates,
                    const Partition& partition);

struct InfomapOptions {
    double teleport = 0.15;
    std::uint64_t seed = 0;
    /// Optional explicit sweep priority per node (a permutation of 0..n-1);
    /// overrides the seeded order.
    std::optional<std::vector<NodeId>> node_rank;
    std::size_t max_sweeps_per_level = 200;
};

struct InfomapResult {
    Partition partition;
    double initial_codelength = 0.0;  // all singletons
    double final_codelength = 0.0;
    /// Codelength after every sweep that moved at least one node.
    std::vector<double> trace;
    std::size_t levels = 0;
};

/// Greedy two-level map-equation minimization: local moving from singletons,
/// contraction into super-nodes until a level improves by < 1e-12 bits, then
/// one node-level refinement pass.
InfomapResult run_infomap(const MultilayerNetwork& net, Layer layer, const InfomapOptions& options);

Partition cluster_layer(const MultilayerNetwork& net, Layer layer, double teleport,
                        std::uint64_t seed);

/// Weakly connected components of a layer.
Partition connected_components(const MultilayerNetwork& net, Layer layer);

/// Pluggable clustering strategy used by the pipeline.
using Clusterer = std::function<Partition(const MultilayerNetwork&, Layer)>;

Clusterer infomap_clusterer(double teleport, std::uint64_t seed);
Clusterer components_clusterer();

/// The network with cluster nodes C_R and C_M and Belong edges. Holds a
/// reference to `base`, which must outlive it.
class AugmentedNetwork {
public:
    AugmentedNetwork(const MultilayerNetwork& base, Partition part_r, Partition part_m);

    const MultilayerNetwork& base() const noexcept { return *base_; }
    const Partition& partition(Layer source) const;
    std::size_t cluster_count(Layer source) const { return partition(source).cluster_count; }

    /// B: the cluster of `node` in the source layer's partition.
    ClusterId cluster_of(Layer source, NodeId node) const {
        return partition(source).assignment[node];
    }
    /// B^-1: members of a cluster, ascending.
    std::span<const NodeId> members(Layer source, ClusterId cluster) const;

    std::span<const NodeId> neighbors(NodeId node, const RelationStep& step) const {
        return base_->neighbors(node, step);
    }

private:
    struct Index {
        std::vector<std::size_t> offsets;
        std::vector<NodeId> nodes;
    };
    static Index build_index(const Partition& p);
    const Index& index(Layer source) const;

    const MultilayerNetwork* base_;
    Partition part_r_;
    Partition part_m_;
    Index index_r_;
    Index index_m_;
};

AugmentedNetwork augment(const MultilayerNetwork& net, Partition part_r, Partition part_m);

}  // namespace twoway
