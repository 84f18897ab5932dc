#include "twoway/network.hpp"

#include <algorithm>
#include <tuple>

namespace twoway {

std::string_view to_string(Layer layer) noexcept {
    switch (layer) {
        case Layer::F: return "F";
        case Layer::M: return "M";
        case Layer::R: return "R";
    }
    return "?";
}

Layer parse_layer(std::string_view name) {
    if (name == "F") return Layer::F;
    if (name == "M") return Layer::M;
    if (name == "R") return Layer::R;
    throw DomainError("netcore", "unknown layer '" + std::string(name) + "'");
}

std::string_view to_string(Sign sign) noexcept { return sign == Sign::Positive ? "+1" : "-1"; }

RelationStep RelationStep::forward(Layer layer, std::optional<Sign> sign) {
    RelationStep step{layer, Direction::Forward, sign, false};
    step.validate();
    return step;
}

RelationStep RelationStep::inverse(Layer layer, std::optional<Sign> sign) {
    RelationStep step{layer, Direction::Inverse, sign, false};
    step.validate();
    return step;
}

void RelationStep::validate() const {
    if ((layer == Layer::F) != sign.has_value()) {
        throw DomainError("netcore", "relation step on layer " + std::string(to_string(layer)) +
                                         (sign ? " must not carry a sign" : " requires a sign"));
    }
}

std::string RelationStep::label() const {
    std::string out(to_string(layer));
    if (sign) out += (*sign == Sign::Positive ? "+" : "-");
    if (direction == Direction::Inverse) out += "^-1";
    return out;
}

std::vector<SignedEdge> merge_edges(std::vector<SignedEdge> edges) {
    std::sort(edges.begin(), edges.end(), [](const SignedEdge& a, const SignedEdge& b) {
        return std::tie(a.layer, a.src, a.dst) < std::tie(b.layer, b.src, b.dst);
    });
    std::vector<SignedEdge> merged;
    merged.reserve(edges.size());
    for (const auto& e : edges) {
        if (!merged.empty()) {
            auto& last = merged.back();
            if (last.layer == e.layer && last.src == e.src && last.dst == e.dst) {
                if (last.sign != e.sign) {
                    throw ConflictError("netcore", "conflicting signs for F pair (" +
                                                       std::to_string(e.src) + "," +
                                                       std::to_string(e.dst) + ")");
                }
                last.weight += e.weight;
                continue;
            }
        }
        merged.push_back(e);
    }
    return merged;
}

Adjacency::Adjacency(std::size_t node_count, std::vector<Arc> arcs) {
    std::sort(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    offsets_.assign(node_count + 1, 0);
    for (const auto& a : arcs) ++offsets_[a.from + 1];
    for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
    targets_.reserve(arcs.size());
    weights_.reserve(arcs.size());
    for (const auto& a : arcs) {
        targets_.push_back(a.to);
        weights_.push_back(a.weight);
    }
}

bool Adjacency::contains(NodeId from, NodeId to) const noexcept {
    if (from + 1 >= offsets_.size()) return false;
    const auto t = targets(from);
    return std::binary_search(t.begin(), t.end(), to);
}

void MultilayerNetwork::check_node(NodeId node) const {
    if (node >= node_count_) {
        throw BoundsError("netcore", "node " + std::to_string(node) + " out of range (node_count " +
                                         std::to_string(node_count_) + ")");
    }
}

std::span<const NodeId> MultilayerNetwork::neighbors(NodeId node, const RelationStep& step) const {
    check_node(node);
    step.validate();
    if (step.bridge) {
        throw DomainError("netcore", "bridge steps are served by the augmented network");
    }
    const bool fwd = step.direction == Direction::Forward;
    if (step.layer == Layer::F) {
        return fwd ? f_out(*step.sign).targets(node) : f_in(*step.sign).targets(node);
    }
    return fwd ? out(step.layer).targets(node) : in(step.layer).targets(node);
}

bool MultilayerNetwork::has_edge(Layer layer, NodeId src, NodeId dst) const noexcept {
    return out(layer).contains(src, dst);
}

std::optional<Sign> MultilayerNetwork::f_sign(NodeId src, NodeId dst) const noexcept {
    if (f_out(Sign::Positive).contains(src, dst)) return Sign::Positive;
    if (f_out(Sign::Negative).contains(src, dst)) return Sign::Negative;
    return std::nullopt;
}

MultilayerNetwork build_network(const LayerEdges& edges, std::size_t node_count) {
    if (node_count > std::size_t{0xffffffffu}) {
        throw BoundsError("netcore", "node_count exceeds the 32-bit id space");
    }
    MultilayerNetwork net;
    net.node_count_ = node_count;

    for (Layer layer : kAllLayers) {
        const auto& list = edges[layer];
        for (const auto& e : list) {
            if (e.layer != layer) {
                throw DomainError("netcore", "edge tagged " + std::string(to_string(e.layer)) +
                                                 " supplied in layer " +
                                                 std::string(to_string(layer)));
            }
            if (e.src >= node_count || e.dst >= node_count) {
                throw BoundsError("netcore", "edge (" + std::to_string(e.src) + "," +
                                                 std::to_string(e.dst) + ") in layer " +
                                                 std::string(to_string(layer)) +
                                                 " has an endpoint >= node_count " +
                                                 std::to_string(node_count));
            }
            if (e.src == e.dst) {
                throw DomainError("netcore", "self-loop on node " + std::to_string(e.src));
            }
            if ((layer == Layer::F) != e.sign.has_value()) {
                throw DomainError("netcore", "sign must be present exactly on F edges");
            }
            if (e.weight == 0) throw DomainError("netcore", "edge weight must be >= 1");
        }
        net.edges_[layer] = merge_edges(list);

        std::vector<Adjacency::Arc> fwd;
        std::vector<Adjacency::Arc> rev;
        fwd.reserve(net.edges_[layer].size());
        rev.reserve(net.edges_[layer].size());
        for (const auto& e : net.edges_[layer]) {
            fwd.push_back({e.src, e.dst, e.weight});
            rev.push_back({e.dst, e.src, e.weight});
        }
        net.out_[layer_index(layer)] = Adjacency(node_count, std::move(fwd));
        net.in_[layer_index(layer)] = Adjacency(node_count, std::move(rev));
    }

    for (Sign s : {Sign::Positive, Sign::Negative}) {
        std::vector<Adjacency::Arc> fwd;
        std::vector<Adjacency::Arc> rev;
        for (const auto& e : net.edges_[Layer::F]) {
            if (*e.sign != s) continue;
            fwd.push_back({e.src, e.dst, e.weight});
            rev.push_back({e.dst, e.src, e.weight});
        }
        net.f_out_[sign_index(s)] = Adjacency(node_count, std::move(fwd));
        net.f_in_[sign_index(s)] = Adjacency(node_count, std::move(rev));
    }
    return net;
}

std::size_t MaskedView::hidden_count() const noexcept {
    std::size_t n = hidden_ ? hidden_->size() : 0;
    if (extra_ && !(hidden_ && hidden_->contains(*extra_))) ++n;
    return n;
}

MaskedView MaskedView::hiding(NodeId src, NodeId dst) const {
    if (!base_->f_sign(src, dst) || is_hidden(src, dst)) return *this;
    MaskedView out = *this;
    if (!extra_) {
        out.extra_ = edge_key(src, dst);
        return out;
    }
    auto merged = hidden_ ? std::unordered_set<std::uint64_t>(*hidden_)
                          : std::unordered_set<std::uint64_t>{};
    merged.insert(*extra_);
    out.hidden_ = std::make_shared<const std::unordered_set<std::uint64_t>>(std::move(merged));
    out.extra_ = edge_key(src, dst);
    return out;
}

std::vector<NodeId> MaskedView::neighbors(NodeId node, const RelationStep& step) const {
    std::vector<NodeId> out;
    for_each_neighbor(node, step, [&](NodeId w) { out.push_back(w); });
    return out;
}

std::optional<Sign> MaskedView::f_sign(NodeId src, NodeId dst) const noexcept {
    if (is_hidden(src, dst)) return std::nullopt;
    return base_->f_sign(src, dst);
}

bool MaskedView::has_edge(Layer layer, NodeId src, NodeId dst) const noexcept {
    if (layer == Layer::F && is_hidden(src, dst)) return false;
    return base_->has_edge(layer, src, dst);
}

std::vector<SignedEdge> MaskedView::f_edges() const {
    std::vector<SignedEdge> out;
    const auto& all = base_->edges(Layer::F);
    out.reserve(all.size());
    for (const auto& e : all) {
        if (!is_hidden(e.src, e.dst)) out.push_back(e);
    }
    return out;
}

MaskedView mask_f_edges(const MultilayerNetwork& net,
                        std::span<const std::pair<NodeId, NodeId>> hidden) {
    std::unordered_set<std::uint64_t> keys;
    keys.reserve(hidden.size() * 2);
    for (const auto& [src, dst] : hidden) {
        if (src >= net.node_count() || dst >= net.node_count() || !net.f_sign(src, dst)) {
            throw NotFoundError("netcore", "(" + std::to_string(src) + "," + std::to_string(dst) +
                                               ") is not an F edge");
        }
        keys.insert(edge_key(src, dst));
    }
    MaskedView view(net);
    view.hidden_ = std::make_shared<const std::unordered_set<std::uint64_t>>(std::move(keys));
    return view;
}

std::vector<NodeId> positive_f_neighbors(const MaskedView& view, NodeId node) {
    std::vector<NodeId> out;
    const auto collect = [&](NodeId w) { out.push_back(w); };
    view.for_each_neighbor(node, RelationStep::forward(Layer::F, Sign::Positive), collect);
    view.for_each_neighbor(node, RelationStep::inverse(Layer::F, Sign::Positive), collect);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::size_t embeddedness(const MaskedView& view, NodeId u, NodeId v) {
    view.base().check_node(u);
    view.base().check_node(v);
    if (u == v) throw DomainError("netcore", "embeddedness of a node with itself is undefined");
    const auto nu = positive_f_neighbors(view, u);
    const auto nv = positive_f_neighbors(view, v);
    std::size_t common = 0;
    auto a = nu.begin();
    auto b = nv.begin();
    while (a != nu.end() && b != nv.end()) {
        if (*a < *b) {
            ++a;
        } else if (*b < *a) {
            ++b;
        } else {
            if (*a != u && *a != v) ++common;
            ++a;
            ++b;
        }
    }
    return common;
}

}  // namespace twoway
