#include "twoway/metapath.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace twoway {
namespace {

constexpr std::size_t kFinals = 4;

const std::array<RelationStep, 4>& first_steps() {
    static const std::array<RelationStep, 4> steps{
        RelationStep::forward(Layer::R), RelationStep::inverse(Layer::R),
        RelationStep::forward(Layer::M), RelationStep::inverse(Layer::M)};
    return steps;
}

const std::array<RelationStep, 4>& final_steps() {
    static const std::array<RelationStep, 4> steps{
        RelationStep::forward(Layer::F, Sign::Positive), RelationStep::forward(Layer::F, Sign::Negative),
        RelationStep::inverse(Layer::F, Sign::Positive), RelationStep::inverse(Layer::F, Sign::Negative)};
    return steps;
}

std::string step_name(const RelationStep& s) {
    std::string out(to_string(s.layer));
    if (s.direction == Direction::Inverse) out += "-1";
    return out;
}

std::string final_name(const RelationStep& s) {
    return std::string("F") + (*s.sign == Sign::Positive ? "+" : "-") +
           (s.direction == Direction::Forward ? "(fwd)" : "(inv)");
}

std::vector<MetaPathSpec> build(bool clustered) {
    std::vector<MetaPathSpec> specs;
    specs.reserve(16);
    for (const auto& x : first_steps()) {
        for (const auto& f : final_steps()) {
            MetaPathSpec spec;
            spec.first_step = x;
            spec.final_step = f;
            spec.name = step_name(x) + ".";
            if (clustered) {
                spec.bridge = x.layer;
                spec.name += "B.B-1.";
            }
            spec.name += final_name(f);
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

std::size_t bridge_slot(Layer layer) { return layer == Layer::R ? 0 : 1; }

// Nodes w for which the final step relates w to v, in the view.
template <class Fn>
void for_each_final(const MaskedView& view, const RelationStep& final_step, NodeId v, Fn&& fn) {
    // F(s) fwd is the arc w -> v, found from v by the inverse step, and vice versa.
    RelationStep from_v = final_step;
    from_v.direction =
        final_step.direction == Direction::Forward ? Direction::Inverse : Direction::Forward;
    view.for_each_neighbor(v, from_v, fn);
}

void check_pair(const AugmentedNetwork& net, const MaskedView& view, NodeId u, NodeId v) {
    if (&view.base() != &net.base()) {
        throw DomainError("metapath", "masked view and augmented network use different networks");
    }
    net.base().check_node(u);
    net.base().check_node(v);
    if (u == v) throw DomainError("metapath", "initiator and recipient must differ");
}

}  // namespace

std::string_view to_string(FeatureMode mode) noexcept {
    switch (mode) {
        case FeatureMode::NB: return "nb";
        case FeatureMode::CB: return "cb";
        case FeatureMode::Both: return "both";
    }
    return "both";
}

FeatureMode parse_feature_mode(std::string_view name) {
    if (name == "nb") return FeatureMode::NB;
    if (name == "cb") return FeatureMode::CB;
    if (name == "both") return FeatureMode::Both;
    throw DomainError("metapath", "unknown feature mode '" + std::string(name) + "'");
}

std::vector<MetaPathSpec> node_based_paths() { return build(false); }
std::vector<MetaPathSpec> cluster_based_paths() { return build(true); }

std::vector<MetaPathSpec> feature_specs(FeatureMode mode) {
    if (mode == FeatureMode::NB) return node_based_paths();
    if (mode == FeatureMode::CB) return cluster_based_paths();
    auto specs = node_based_paths();
    for (auto& s : cluster_based_paths()) specs.push_back(std::move(s));
    return specs;
}

std::vector<std::string> feature_columns(FeatureMode mode) {
    std::vector<std::string> names;
    for (const auto& s : feature_specs(mode)) names.push_back(s.name);
    return names;
}

std::size_t feature_count(FeatureMode mode) noexcept { return mode == FeatureMode::Both ? 32 : 16; }

std::uint64_t count_paths(const AugmentedNetwork& net, const MaskedView& view,
                          const MetaPathSpec& spec, NodeId u, NodeId v) {
    check_pair(net, view, u, v);
    const auto firsts = net.neighbors(u, spec.first_step);
    std::uint64_t total = 0;
    if (!spec.cluster_based()) {
        for_each_final(view, spec.final_step, v, [&](NodeId w) {
            if (std::binary_search(firsts.begin(), firsts.end(), w)) ++total;
        });
        return total;
    }
    const Layer bridge = *spec.bridge;
    std::vector<std::uint64_t> per_cluster(net.cluster_count(bridge), 0);
    for_each_final(view, spec.final_step, v,
                   [&](NodeId w2) { ++per_cluster[net.cluster_of(bridge, w2)]; });
    for (NodeId w : firsts) total += per_cluster[net.cluster_of(bridge, w)];
    return total;
}

PathCounter::PathCounter(const AugmentedNetwork& net)
    : net_(&net), final_mask_(net.base().node_count(), 0) {
    bucket_[0].assign(net.cluster_count(Layer::R) * kFinals, 0);
    bucket_[1].assign(net.cluster_count(Layer::M) * kFinals, 0);
}

void PathCounter::check(const MaskedView& view, NodeId u, NodeId v) const {
    check_pair(*net_, view, u, v);
}

FeatureRow PathCounter::row(const MaskedView& view, NodeId u, NodeId v, FeatureMode mode,
                            std::optional<Sign> label) {
    check(view, u, v);
    const bool want_nb = mode != FeatureMode::CB;
    const bool want_cb = mode != FeatureMode::NB;
    const auto& finals = final_steps();

    for (std::size_t f = 0; f < kFinals; ++f) {
        for_each_final(view, finals[f], v, [&](NodeId w) {
            if (want_nb) {
                if (final_mask_[w] == 0) marked_.push_back(w);
                final_mask_[w] |= static_cast<std::uint8_t>(1u << f);
            }
            if (want_cb) {
                for (Layer layer : {Layer::R, Layer::M}) {
                    const auto slot = bridge_slot(layer);
                    const auto c = net_->cluster_of(layer, w);
                    auto& cell = bucket_[slot][c * kFinals + f];
                    if (cell == 0) touched_[slot].push_back(c);
                    ++cell;
                }
            }
        });
    }

    FeatureRow out;
    out.initiator = u;
    out.recipient = v;
    out.label = label;
    out.counts.assign(feature_count(mode), 0);

    const auto& firsts = first_steps();
    std::size_t base = 0;
    if (want_nb) {
        for (std::size_t x = 0; x < firsts.size(); ++x) {
            for (NodeId w : net_->neighbors(u, firsts[x])) {
                const auto bits = final_mask_[w];
                if (bits == 0) continue;
                for (std::size_t f = 0; f < kFinals; ++f) {
                    if (bits & (1u << f)) ++out.counts[x * kFinals + f];
                }
            }
        }
        base = 16;
    }
    if (want_cb) {
        for (std::size_t x = 0; x < firsts.size(); ++x) {
            const Layer layer = firsts[x].layer;
            const auto& bucket = bucket_[bridge_slot(layer)];
            for (NodeId w : net_->neighbors(u, firsts[x])) {
                const auto c = net_->cluster_of(layer, w);
                for (std::size_t f = 0; f < kFinals; ++f) {
                    out.counts[base + x * kFinals + f] += bucket[c * kFinals + f];
                }
            }
        }
    }

    for (NodeId w : marked_) final_mask_[w] = 0;
    marked_.clear();
    for (std::size_t slot = 0; slot < 2; ++slot) {
        for (ClusterId c : touched_[slot]) {
            for (std::size_t f = 0; f < kFinals; ++f) bucket_[slot][c * kFinals + f] = 0;
        }
        touched_[slot].clear();
    }
    return out;
}

FeatureRow feature_row(const AugmentedNetwork& net, const MaskedView& view, NodeId u, NodeId v,
                       FeatureMode mode, std::optional<Sign> label) {
    PathCounter counter(net);
    return counter.row(view, u, v, mode, label);
}

}  // namespace twoway
