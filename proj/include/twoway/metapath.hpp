#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twoway/community.hpp"
#include "twoway/network.hpp"

namespace twoway {

/// U -X-> U -F-> U (node-based) or U -X-> U -B-> C -B^-1-> U -F-> U
/// (cluster-based, the bridge uses X's own layer).
struct MetaPathSpec {
    std::string name;
    RelationStep first_step;
    std::optional<Layer> bridge;
    RelationStep final_step;

    bool cluster_based() const noexcept { return bridge.has_value(); }
};

enum class FeatureMode : std::uint8_t { NB, CB, Both };

std::string_view to_string(FeatureMode mode) noexcept;
FeatureMode parse_feature_mode(std::string_view name);

/// First steps R, R^-1, M, M^-1 crossed with final steps F(+), F(-),
/// F^-1(+), F^-1(-), in that order.
std::vector<MetaPathSpec> node_based_paths();
std::vector<MetaPathSpec> cluster_based_paths();

/// Specs for a mode; Both is the node-based block followed by the cluster-based one.
std::vector<MetaPathSpec> feature_specs(FeatureMode mode);
std::vector<std::string> feature_columns(FeatureMode mode);
std::size_t feature_count(FeatureMode mode) noexcept;

struct FeatureRow {
    NodeId initiator = 0;
    NodeId recipient = 0;
    std::vector<std::uint64_t> counts;
    std::optional<Sign> label;
};

/// Path-instance count for one spec. The caller hides the target edge.
std::uint64_t count_paths(const AugmentedNetwork& net, const MaskedView& view,
                          const MetaPathSpec& spec, NodeId u, NodeId v);

/// Reusable scratch for feature extraction. Not thread-safe; use one per thread.
class PathCounter {
public:
    explicit PathCounter(const AugmentedNetwork& net);

    FeatureRow row(const MaskedView& view, NodeId u, NodeId v, FeatureMode mode,
                   std::optional<Sign> label = {});

private:
    void check(const MaskedView& view, NodeId u, NodeId v) const;

    const AugmentedNetwork* net_;
    std::vector<std::uint8_t> final_mask_;             // per node, bit f = final step f holds
    std::vector<NodeId> marked_;
    std::array<std::vector<std::uint32_t>, 2> bucket_;  // [R, M] cluster * 4 + final
    std::array<std::vector<ClusterId>, 2> touched_;
};

FeatureRow feature_row(const AugmentedNetwork& net, const MaskedView& view, NodeId u, NodeId v,
                       FeatureMode mode, std::optional<Sign> label = {});

}  // namespace twoway
