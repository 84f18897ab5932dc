#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "twoway/error.hpp"

namespace twoway {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

/// Response to a link initiation: +1 accepted, -1 rejected.
enum class Sign : std::int8_t { Negative = -1, Positive = 1 };

/// F: signed two-way initiations (the target layer).
/// M: messages, sender -> receiver.
/// R: regular matches, loser -> winner.
enum class Layer : std::uint8_t { F = 0, M = 1, R = 2 };

enum class Direction : std::uint8_t { Forward, Inverse };

inline constexpr std::array<Layer, 3> kAllLayers{Layer::F, Layer::M, Layer::R};

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }
constexpr std::size_t sign_index(Sign s) noexcept { return s == Sign::Positive ? 0 : 1; }
constexpr std::size_t layer_index(Layer l) noexcept { return static_cast<std::size_t>(l); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::Positive ? Sign::Negative : Sign::Positive; }

std::string_view to_string(Layer layer) noexcept;
Layer parse_layer(std::string_view name);
std::string_view to_string(Sign sign) noexcept;

/// One hop of a meta-path over a user layer.
struct RelationStep {
    Layer layer = Layer::M;
    Direction direction = Direction::Forward;
    std::optional<Sign> sign;  // required iff layer == F
    bool bridge = false;       // Belong hop, served by AugmentedNetwork

    static RelationStep forward(Layer layer, std::optional<Sign> sign = {});
    static RelationStep inverse(Layer layer, std::optional<Sign> sign = {});

    /// Throws DomainError when the sign filter does not match the layer.
    void validate() const;
    std::string label() const;

    friend bool operator==(const RelationStep&, const RelationStep&) = default;
};

struct SignedEdge {
    NodeId src = 0;
    NodeId dst = 0;
    Layer layer = Layer::M;
    std::optional<Sign> sign;
    std::uint32_t weight = 1;

    friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

constexpr std::uint64_t edge_key(NodeId src, NodeId dst) noexcept {
    return (static_cast<std::uint64_t>(src) << 32) | dst;
}
constexpr std::pair<NodeId, NodeId> edge_endpoints(std::uint64_t key) noexcept {
    return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

/// Per-layer edge lists indexed by Layer.
struct LayerEdges {
    std::array<std::vector<SignedEdge>, 3> lists;

    std::vector<SignedEdge>& operator[](Layer l) { return lists[layer_index(l)]; }
    const std::vector<SignedEdge>& operator[](Layer l) const { return lists[layer_index(l)]; }
};

/// Sums parallel duplicates into one edge per (src, dst, layer). The result
/// is sorted by (layer, src, dst). Conflicting F signs raise ConflictError.
std::vector<SignedEdge> merge_edges(std::vector<SignedEdge> edges);

/// Compressed sparse adjacency. Neighbor lists are sorted by node id.
class Adjacency {
public:
    struct Arc {
        NodeId from;
        NodeId to;
        std::uint32_t weight;
    };

    Adjacency() = default;
    Adjacency(std::size_t node_count, std::vector<Arc> arcs);

    std::span<const NodeId> targets(NodeId node) const noexcept {
        return {targets_.data() + offsets_[node], targets_.data() + offsets_[node + 1]};
    }
    std::span<const std::uint32_t> weights(NodeId node) const noexcept {
        return {weights_.data() + offsets_[node], weights_.data() + offsets_[node + 1]};
    }
    std::size_t degree(NodeId node) const noexcept { return offsets_[node + 1] - offsets_[node]; }
    bool contains(NodeId from, NodeId to) const noexcept;
    std::size_t arc_count() const noexcept { return targets_.size(); }

private:
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
    std::vector<std::uint32_t> weights_;
};

/// Three directed layers over one dense node universe. Immutable after
/// construction; safe for concurrent readers.
class MultilayerNetwork {
public:
    MultilayerNetwork() = default;

    std::size_t node_count() const noexcept { return node_count_; }
    std::size_t edge_count(Layer layer) const noexcept { return edges_[layer].size(); }

    /// Merged edges of one layer, sorted by (src, dst).
    const std::vector<SignedEdge>& edges(Layer layer) const noexcept { return edges_[layer]; }

    /// Unsigned adjacency of a layer (for F: both signs).
    const Adjacency& out(Layer layer) const noexcept { return out_[layer_index(layer)]; }
    const Adjacency& in(Layer layer) const noexcept { return in_[layer_index(layer)]; }
    const Adjacency& f_out(Sign s) const noexcept { return f_out_[sign_index(s)]; }
    const Adjacency& f_in(Sign s) const noexcept { return f_in_[sign_index(s)]; }

    /// Neighbors reached from `node` by one non-bridge step.
    std::span<const NodeId> neighbors(NodeId node, const RelationStep& step) const;

    bool has_edge(Layer layer, NodeId src, NodeId dst) const noexcept;
    std::optional<Sign> f_sign(NodeId src, NodeId dst) const noexcept;

    void check_node(NodeId node) const;

private:
    friend MultilayerNetwork build_network(const LayerEdges&, std::size_t);

    std::size_t node_count_ = 0;
    LayerEdges edges_;
    std::array<Adjacency, 3> out_;
    std::array<Adjacency, 3> in_;
    std::array<Adjacency, 2> f_out_;
    std::array<Adjacency, 2> f_in_;
};

/// Validates endpoints and layer tags, merges duplicates, and builds all
/// adjacency indexes.
MultilayerNetwork build_network(const LayerEdges& edges, std::size_t node_count);

/// Read-only overlay of a network with some F edges hidden. Copies share the
/// hidden set, so `hiding()` is cheap.
class MaskedView {
public:
    // Implicit: an unmasked network is a view with nothing hidden.
    MaskedView(const MultilayerNetwork& base) : base_(&base) {}  // NOLINT

    const MultilayerNetwork& base() const noexcept { return *base_; }
    std::size_t node_count() const noexcept { return base_->node_count(); }

    bool is_hidden(NodeId src, NodeId dst) const noexcept {
        const auto key = edge_key(src, dst);
        if (extra_ && *extra_ == key) return true;
        return hidden_ && hidden_->contains(key);
    }
    bool has_mask() const noexcept { return extra_.has_value() || (hidden_ && !hidden_->empty()); }
    std::size_t hidden_count() const noexcept;

    /// The same view with one more F pair hidden. Absent pairs are ignored.
    MaskedView hiding(NodeId src, NodeId dst) const;

    template <class Fn>
    void for_each_neighbor(NodeId node, const RelationStep& step, Fn&& fn) const {
        const auto nbrs = base_->neighbors(node, step);
        if (step.layer != Layer::F || !has_mask()) {
            for (NodeId w : nbrs) fn(w);
            return;
        }
        const bool fwd = step.direction == Direction::Forward;
        for (NodeId w : nbrs) {
            if (!(fwd ? is_hidden(node, w) : is_hidden(w, node))) fn(w);
        }
    }

    std::vector<NodeId> neighbors(NodeId node, const RelationStep& step) const;
    std::optional<Sign> f_sign(NodeId src, NodeId dst) const noexcept;
    bool has_edge(Layer layer, NodeId src, NodeId dst) const noexcept;

    /// Visible F edges, sorted by (src, dst).
    std::vector<SignedEdge> f_edges() const;

private:
    friend MaskedView mask_f_edges(const MultilayerNetwork&,
                                   std::span<const std::pair<NodeId, NodeId>>);

    const MultilayerNetwork* base_;
    std::shared_ptr<const std::unordered_set<std::uint64_t>> hidden_;
    std::optional<std::uint64_t> extra_;
};

/// Hides the given F pairs. Throws NotFoundError for a pair that is not an F edge.
MaskedView mask_f_edges(const MultilayerNetwork& net,
                        std::span<const std::pair<NodeId, NodeId>> hidden);

/// Nodes joined to `node` by a visible positive F edge in either direction,
/// sorted and unique.
std::vector<NodeId> positive_f_neighbors(const MaskedView& view, NodeId node);

/// Number of common positive-F neighbors of u and v, direction ignored.
std::size_t embeddedness(const MaskedView& view, NodeId u, NodeId v);

}  // namespace twoway
