#include "twoway/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "twoway/rng.hpp"

namespace twoway {
namespace {

constexpr double kLevelTolerance = 1e-12;
constexpr double kMoveTolerance = 1e-14;
constexpr double kRateTolerance = 1e-10;
constexpr std::size_t kMaxRateIterations = 10000;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

void check_source_layer(Layer layer) {
    if (layer == Layer::F) {
        throw DomainError("community", "only the source layers M and R are clustered");
    }
}

void check_teleport(double teleport) {
    if (!(teleport > 0.0 && teleport < 1.0)) {
        throw DomainError("community", "teleport probability must lie in (0, 1)");
    }
}

// Module-level flow graph used by the optimizer. Arcs never loop.
struct FlowLevel {
    std::vector<double> flow;
    std::vector<double> teleport;
    std::vector<double> members;  // original nodes represented
    std::vector<std::size_t> out_offsets{0};
    std::vector<NodeId> out_targets;
    std::vector<double> out_flow;
    std::vector<std::size_t> in_offsets{0};
    std::vector<NodeId> in_sources;
    std::vector<double> in_flow;

    std::size_t size() const { return flow.size(); }
};

FlowLevel build_level(std::size_t n, std::vector<double> flow, std::vector<double> teleport,
                      std::vector<double> members,
                      std::vector<std::tuple<NodeId, NodeId, double>> arcs) {
    FlowLevel level;
    level.flow = std::move(flow);
    level.teleport = std::move(teleport);
    level.members = std::move(members);
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    level.out_offsets.assign(n + 1, 0);
    level.in_offsets.assign(n + 1, 0);
    for (const auto& [s, t, f] : arcs) {
        ++level.out_offsets[s + 1];
        ++level.in_offsets[t + 1];
    }
    for (std::size_t i = 0; i < n; ++i) {
        level.out_offsets[i + 1] += level.out_offsets[i];
        level.in_offsets[i + 1] += level.in_offsets[i];
    }
    level.out_targets.resize(arcs.size());
    level.out_flow.resize(arcs.size());
    level.in_sources.resize(arcs.size());
    level.in_flow.resize(arcs.size());
    auto out_pos = level.out_offsets;
    auto in_pos = level.in_offsets;
    for (const auto& [s, t, f] : arcs) {
        level.out_targets[out_pos[s]] = t;
        level.out_flow[out_pos[s]++] = f;
        level.in_sources[in_pos[t]] = s;
        level.in_flow[in_pos[t]++] = f;
    }
    return level;
}

class MapOptimizer {
public:
    MapOptimizer(std::size_t total_nodes, double node_entropy)
        : total_(static_cast<double>(total_nodes)), node_entropy_(node_entropy) {}

    void reset(const FlowLevel& level, const std::vector<ClusterId>& modules) {
        level_ = &level;
        module_ = modules;
        const std::size_t k = level.size();
        mod_flow_.assign(k, 0.0);
        mod_tele_.assign(k, 0.0);
        mod_members_.assign(k, 0.0);
        mod_exit_.assign(k, 0.0);
        mod_size_.assign(k, 0);
        for (std::size_t i = 0; i < level.size(); ++i) {
            const auto m = module_[i];
            mod_flow_[m] += level.flow[i];
            mod_tele_[m] += level.teleport[i];
            mod_members_[m] += level.members[i];
            ++mod_size_[m];
            for (std::size_t a = level.out_offsets[i]; a < level.out_offsets[i + 1]; ++a) {
                if (module_[level.out_targets[a]] != m) mod_exit_[m] += level.out_flow[a];
            }
        }
        scratch_out_.assign(k, 0.0);
        scratch_in_.assign(k, 0.0);
        scratch_seen_.assign(k, 0);
        refresh_sums();
    }

    double codelength() const {
        return plogp(sum_q_) - 2.0 * sum_plogp_q_ - node_entropy_ + sum_plogp_qp_;
    }

    /// One pass over all level nodes in index order; returns the number of moves.
    std::size_t sweep() {
        std::size_t moves = 0;
        for (NodeId i = 0; i < level_->size(); ++i) {
            if (try_move(i)) ++moves;
        }
        refresh_sums();
        return moves;
    }

    const std::vector<ClusterId>& modules() const { return module_; }

private:
    double exit_of(double tele, double members, double edge_exit) const {
        const double q = tele * (total_ - members) / total_ + edge_exit;
        return q > 0.0 ? q : 0.0;
    }

    double q_of(ClusterId m) const {
        if (mod_size_[m] == 0) return 0.0;
        return exit_of(mod_tele_[m], mod_members_[m], mod_exit_[m]);
    }

    void refresh_sums() {
        sum_q_ = 0.0;
        sum_plogp_q_ = 0.0;
        sum_plogp_qp_ = 0.0;
        for (std::size_t m = 0; m < mod_flow_.size(); ++m) {
            if (mod_size_[m] == 0) continue;
            const double q = q_of(static_cast<ClusterId>(m));
            sum_q_ += q;
            sum_plogp_q_ += plogp(q);
            sum_plogp_qp_ += plogp(q + mod_flow_[m]);
        }
    }

    bool try_move(NodeId i) {
        const FlowLevel& g = *level_;
        const ClusterId from = module_[i];
        touched_.clear();
        const auto touch = [&](ClusterId m) {
            if (!scratch_seen_[m]) {
                scratch_seen_[m] = 1;
                touched_.push_back(m);
            }
        };
        double out_total = 0.0;
        double in_total = 0.0;
        for (std::size_t a = g.out_offsets[i]; a < g.out_offsets[i + 1]; ++a) {
            const auto m = module_[g.out_targets[a]];
            touch(m);
            scratch_out_[m] += g.out_flow[a];
            out_total += g.out_flow[a];
        }
        for (std::size_t a = g.in_offsets[i]; a < g.in_offsets[i + 1]; ++a) {
            const auto m = module_[g.in_sources[a]];
            touch(m);
            scratch_in_[m] += g.in_flow[a];
            in_total += g.in_flow[a];
        }
        (void)in_total;

        const double p_i = g.flow[i];
        const double t_i = g.teleport[i];
        const double n_i = g.members[i];

        // Source module without i.
        const double q_from = q_of(from);
        const bool from_empties = mod_size_[from] == 1;
        const double exit_from_new =
            mod_exit_[from] - (out_total - scratch_out_[from]) + scratch_in_[from];
        const double q_from_new =
            from_empties ? 0.0
                         : exit_of(mod_tele_[from] - t_i, mod_members_[from] - n_i, exit_from_new);
        const double flow_from_new = mod_flow_[from] - p_i;

        ClusterId best = from;
        double best_delta = 0.0;
        double best_exit_to = 0.0;
        for (ClusterId to : touched_) {
            if (to == from) continue;
            const double q_to = q_of(to);
            const double exit_to_new =
                mod_exit_[to] + (out_total - scratch_out_[to]) - scratch_in_[to];
            const double q_to_new =
                exit_of(mod_tele_[to] + t_i, mod_members_[to] + n_i, exit_to_new);
            const double sum_q_new = sum_q_ - q_from - q_to + q_from_new + q_to_new;
            const double delta =
                plogp(sum_q_new) - plogp(sum_q_) -
                2.0 * (plogp(q_from_new) + plogp(q_to_new) - plogp(q_from) - plogp(q_to)) +
                (from_empties ? 0.0 : plogp(q_from_new + flow_from_new)) +
                plogp(q_to_new + mod_flow_[to] + p_i) - plogp(q_from + mod_flow_[from]) -
                plogp(q_to + mod_flow_[to]);
            if (delta < best_delta || (delta == best_delta && best != from && to < best)) {
                best = to;
                best_delta = delta;
                best_exit_to = exit_to_new;
            }
        }

        bool moved = false;
        if (best != from && best_delta < -kMoveTolerance) {
            const ClusterId to = best;
            const double q_to = q_of(to);
            sum_q_ -= q_from + q_to;
            sum_plogp_q_ -= plogp(q_from) + plogp(q_to);
            sum_plogp_qp_ -= plogp(q_from + mod_flow_[from]) + plogp(q_to + mod_flow_[to]);

            mod_flow_[from] = flow_from_new;
            mod_tele_[from] -= t_i;
            mod_members_[from] -= n_i;
            mod_exit_[from] = exit_from_new;
            --mod_size_[from];
            if (mod_size_[from] == 0) {
                mod_flow_[from] = mod_tele_[from] = mod_members_[from] = mod_exit_[from] = 0.0;
            }
            mod_flow_[to] += p_i;
            mod_tele_[to] += t_i;
            mod_members_[to] += n_i;
            mod_exit_[to] = best_exit_to;
            ++mod_size_[to];
            module_[i] = to;

            const double qf = q_of(from);
            const double qt = q_of(to);
            sum_q_ += qf + qt;
            sum_plogp_q_ += plogp(qf) + plogp(qt);
            if (mod_size_[from] > 0) sum_plogp_qp_ += plogp(qf + mod_flow_[from]);
            sum_plogp_qp_ += plogp(qt + mod_flow_[to]);
            moved = true;
        }

        for (ClusterId m : touched_) {
            scratch_out_[m] = 0.0;
            scratch_in_[m] = 0.0;
            scratch_seen_[m] = 0;
        }
        return moved;
    }

    double total_;
    double node_entropy_;
    const FlowLevel* level_ = nullptr;
    std::vector<ClusterId> module_;
    std::vector<double> mod_flow_;
    std::vector<double> mod_tele_;
    std::vector<double> mod_members_;
    std::vector<double> mod_exit_;
    std::vector<std::size_t> mod_size_;
    std::vector<double> scratch_out_;
    std::vector<double> scratch_in_;
    std::vector<char> scratch_seen_;
    std::vector<ClusterId> touched_;
    double sum_q_ = 0.0;
    double sum_plogp_q_ = 0.0;
    double sum_plogp_qp_ = 0.0;
};

// Contracts modules into super-nodes, numbered by their lowest-index member
// so the level stays in sweep-priority order.
FlowLevel contract(const FlowLevel& level, const std::vector<ClusterId>& modules,
                   std::vector<ClusterId>& relabel) {
    relabel.assign(level.size(), std::numeric_limits<ClusterId>::max());
    ClusterId next = 0;
    for (std::size_t i = 0; i < level.size(); ++i) {
        auto& r = relabel[modules[i]];
        if (r == std::numeric_limits<ClusterId>::max()) r = next++;
    }
    std::vector<double> flow(next, 0.0);
    std::vector<double> tele(next, 0.0);
    std::vector<double> members(next, 0.0);
    std::vector<std::tuple<NodeId, NodeId, double>> arcs;
    for (std::size_t i = 0; i < level.size(); ++i) {
        const auto c = relabel[modules[i]];
        flow[c] += level.flow[i];
        tele[c] += level.teleport[i];
        members[c] += level.members[i];
        for (std::size_t a = level.out_offsets[i]; a < level.out_offsets[i + 1]; ++a) {
            const auto d = relabel[modules[level.out_targets[a]]];
            if (d != c) arcs.emplace_back(c, d, level.out_flow[a]);
        }
    }
    // Merge parallel arcs.
    std::sort(arcs.begin(), arcs.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::vector<std::tuple<NodeId, NodeId, double>> merged;
    for (const auto& arc : arcs) {
        if (!merged.empty() && std::get<0>(merged.back()) == std::get<0>(arc) &&
            std::get<1>(merged.back()) == std::get<1>(arc)) {
            std::get<2>(merged.back()) += std::get<2>(arc);
        } else {
            merged.push_back(arc);
        }
    }
    return build_level(next, std::move(flow), std::move(tele), std::move(members), std::move(merged));
}

}  // namespace

Partition Partition::from_labels(Layer layer, std::span<const std::uint32_t> labels) {
    Partition p;
    p.layer = layer;
    p.assignment.resize(labels.size());
    std::unordered_map<std::uint32_t, ClusterId> dense;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] = dense.try_emplace(labels[i], static_cast<ClusterId>(dense.size()));
        p.assignment[i] = it->second;
    }
    p.cluster_count = dense.size();
    return p;
}

Partition Partition::singletons(Layer layer, std::size_t node_count) {
    Partition p;
    p.layer = layer;
    p.assignment.resize(node_count);
    std::iota(p.assignment.begin(), p.assignment.end(), ClusterId{0});
    p.cluster_count = node_count;
    return p;
}

void Partition::validate(std::size_t node_count) const {
    if (assignment.size() != node_count) {
        throw CoverageError("community", "partition of layer " + std::string(to_string(layer)) +
                                             " covers " + std::to_string(assignment.size()) +
                                             " nodes, network has " + std::to_string(node_count));
    }
    std::vector<char> used(cluster_count, 0);
    for (auto c : assignment) {
        if (c >= cluster_count) {
            throw DomainError("community", "cluster id " + std::to_string(c) +
                                               " >= cluster_count " + std::to_string(cluster_count));
        }
        used[c] = 1;
    }
    if (std::find(used.begin(), used.end(), 0) != used.end()) {
        throw DomainError("community", "partition has an empty cluster");
    }
}

WeightedDigraph WeightedDigraph::from_arcs(std::size_t node_count,
                                           std::span<const std::tuple<NodeId, NodeId, double>> arcs) {
    std::vector<std::tuple<NodeId, NodeId, double>> sorted(arcs.begin(), arcs.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    WeightedDigraph g;
    g.node_count = node_count;
    g.out_offsets.assign(node_count + 1, 0);
    g.in_offsets.assign(node_count + 1, 0);
    g.out_strength.assign(node_count, 0.0);
    for (const auto& [s, t, w] : sorted) {
        if (s >= node_count || t >= node_count) {
            throw BoundsError("community", "arc endpoint out of range");
        }
        ++g.out_offsets[s + 1];
        ++g.in_offsets[t + 1];
        g.out_strength[s] += w;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        g.out_offsets[i + 1] += g.out_offsets[i];
        g.in_offsets[i + 1] += g.in_offsets[i];
    }
    g.out_targets.resize(sorted.size());
    g.out_weights.resize(sorted.size());
    g.in_sources.resize(sorted.size());
    g.in_weights.resize(sorted.size());
    auto in_pos = g.in_offsets;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        const auto& [s, t, w] = sorted[a];
        g.out_targets[a] = t;
        g.out_weights[a] = w;
        g.in_sources[in_pos[t]] = s;
        g.in_weights[in_pos[t]++] = w;
    }
    return g;
}

WeightedDigraph layer_digraph(const MultilayerNetwork& net, Layer layer) {
    std::vector<std::tuple<NodeId, NodeId, double>> arcs;
    arcs.reserve(net.edge_count(layer));
    for (const auto& e : net.edges(layer)) arcs.emplace_back(e.src, e.dst, static_cast<double>(e.weight));
    return WeightedDigraph::from_arcs(net.node_count(), arcs);
}

VisitRates visit_rates(const WeightedDigraph& g, double teleport) {
    check_teleport(teleport);
    const std::size_t n = g.node_count;
    VisitRates rates;
    rates.teleport = teleport;
    if (n == 0) return rates;

    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);
    const double nn = static_cast<double>(n);
    for (rates.iterations = 1; rates.iterations <= kMaxRateIterations; ++rates.iterations) {
        double teleported = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            teleported += g.out_strength[i] > 0.0 ? teleport * p[i] : p[i];
        }
        const double base = teleported / nn;
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double inflow = 0.0;
            for (std::size_t a = g.in_offsets[j]; a < g.in_offsets[j + 1]; ++a) {
                const auto i = g.in_sources[a];
                inflow += p[i] * g.in_weights[a] / g.out_strength[i];
            }
            next[j] = base + (1.0 - teleport) * inflow;
            total += next[j];
        }
        double residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] /= total;
            residual += std::abs(next[j] - p[j]);
        }
        p.swap(next);
        rates.residual = residual;
        if (residual < kRateTolerance) break;
    }
    rates.iterations = std::min(rates.iterations, kMaxRateIterations);

    rates.node_rate = std::move(p);
    rates.teleport_flow.resize(n);
    rates.edge_flow.resize(g.out_targets.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = rates.node_rate[i];
        const bool dangling = g.out_strength[i] <= 0.0;
        rates.teleport_flow[i] = dangling ? pi : teleport * pi;
        for (std::size_t a = g.out_offsets[i]; a < g.out_offsets[i + 1]; ++a) {
            rates.edge_flow[a] = (1.0 - teleport) * pi * g.out_weights[a] / g.out_strength[i];
        }
    }
    return rates;
}

VisitRates visit_rates(const MultilayerNetwork& net, Layer layer, double teleport) {
    check_source_layer(layer);
    return visit_rates(layer_digraph(net, layer), teleport);
}

double map_equation(const WeightedDigraph& g, const VisitRates& rates,
                    std::span<const ClusterId> assignment) {
    const std::size_t n = g.node_count;
    if (assignment.size() != n || rates.node_rate.size() != n) {
        throw CoverageError("community", "partition and visit rates must cover every node");
    }
    if (n == 0) return 0.0;
    const std::size_t k = *std::max_element(assignment.begin(), assignment.end()) + 1;
    std::vector<double> flow(k, 0.0);
    std::vector<double> tele(k, 0.0);
    std::vector<double> members(k, 0.0);
    std::vector<double> edge_exit(k, 0.0);
    double node_entropy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = assignment[i];
        flow[c] += rates.node_rate[i];
        tele[c] += rates.teleport_flow[i];
        members[c] += 1.0;
        node_entropy += plogp(rates.node_rate[i]);
        for (std::size_t a = g.out_offsets[i]; a < g.out_offsets[i + 1]; ++a) {
            if (assignment[g.out_targets[a]] != c) edge_exit[c] += rates.edge_flow[a];
        }
    }
    const double nn = static_cast<double>(n);
    double sum_q = 0.0;
    double sum_plogp_q = 0.0;
    double sum_plogp_qp = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (members[c] == 0.0) continue;
        const double q = tele[c] * (nn - members[c]) / nn + edge_exit[c];
        sum_q += q;
        sum_plogp_q += plogp(q);
        sum_plogp_qp += plogp(q + flow[c]);
    }
    return plogp(sum_q) - 2.0 * sum_plogp_q - node_entropy + sum_plogp_qp;
}

double map_equation(const MultilayerNetwork& net, Layer layer, const VisitRates& rates,
                    const Partition& partition) {
    check_source_layer(layer);
    partition.validate(net.node_count());
    return map_equation(layer_digraph(net, layer), rates, partition.assignment);
}

InfomapResult run_infomap(const MultilayerNetwork& net, Layer layer, const InfomapOptions& options) {
    check_source_layer(layer);
    check_teleport(options.teleport);
    const std::size_t n = net.node_count();

    // Internal index = sweep rank, so the whole optimization is a function of
    // the ranked graph alone.
    std::vector<NodeId> rank(n);
    if (options.node_rank) {
        rank = *options.node_rank;
        std::vector<char> seen(n, 0);
        if (rank.size() != n) throw DomainError("community", "node_rank must cover every node");
        for (auto r : rank) {
            if (r >= n || seen[r]) throw DomainError("community", "node_rank must be a permutation");
            seen[r] = 1;
        }
    } else {
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), NodeId{0});
        Rng rng(options.seed);
        rng.shuffle(std::span<NodeId>(order));
        for (std::size_t pos = 0; pos < n; ++pos) rank[order[pos]] = static_cast<NodeId>(pos);
    }

    std::vector<std::tuple<NodeId, NodeId, double>> ranked_arcs;
    ranked_arcs.reserve(net.edge_count(layer));
    for (const auto& e : net.edges(layer)) {
        ranked_arcs.emplace_back(rank[e.src], rank[e.dst], static_cast<double>(e.weight));
    }
    const auto graph = WeightedDigraph::from_arcs(n, ranked_arcs);
    const auto rates = visit_rates(graph, options.teleport);

    InfomapResult result;
    if (n == 0) {
        result.partition = Partition::singletons(layer, 0);
        return result;
    }

    double node_entropy = 0.0;
    for (double p : rates.node_rate) node_entropy += plogp(p);

    std::vector<std::tuple<NodeId, NodeId, double>> flow_arcs;
    flow_arcs.reserve(graph.out_targets.size());
    for (NodeId i = 0; i < n; ++i) {
        for (std::size_t a = graph.out_offsets[i]; a < graph.out_offsets[i + 1]; ++a) {
            flow_arcs.emplace_back(i, graph.out_targets[a], rates.edge_flow[a]);
        }
    }
    const FlowLevel base = build_level(n, rates.node_rate, rates.teleport_flow,
                                       std::vector<double>(n, 1.0), std::move(flow_arcs));

    std::vector<ClusterId> node_module(n);  // ranked node -> module at the finest level
    std::iota(node_module.begin(), node_module.end(), ClusterId{0});

    const auto current_codelength = [&] { return map_equation(graph, rates, node_module); };
    result.initial_codelength = current_codelength();
    result.trace.push_back(result.initial_codelength);

    MapOptimizer optimizer(n, node_entropy);
    FlowLevel level = base;
    std::vector<ClusterId> level_of_node(n);  // ranked node -> current level node
    std::iota(level_of_node.begin(), level_of_node.end(), ClusterId{0});
    double previous = result.initial_codelength;

    while (true) {
        std::vector<ClusterId> singletons(level.size());
        std::iota(singletons.begin(), singletons.end(), ClusterId{0});
        optimizer.reset(level, singletons);
        bool moved = false;
        for (std::size_t s = 0; s < options.max_sweeps_per_level; ++s) {
            if (optimizer.sweep() == 0) break;
            moved = true;
            for (std::size_t i = 0; i < n; ++i) node_module[i] = optimizer.modules()[level_of_node[i]];
            result.trace.push_back(current_codelength());
        }
        if (!moved) break;
        ++result.levels;
        std::vector<ClusterId> relabel;
        level = contract(level, optimizer.modules(), relabel);
        for (std::size_t i = 0; i < n; ++i) {
            level_of_node[i] = relabel[optimizer.modules()[level_of_node[i]]];
            node_module[i] = level_of_node[i];
        }
        const double now = result.trace.back();
        if (previous - now < kLevelTolerance) break;
        previous = now;
    }

    // Refinement: single nodes may leave the modules they were contracted into.
    optimizer.reset(base, node_module);
    for (std::size_t s = 0; s < options.max_sweeps_per_level; ++s) {
        if (optimizer.sweep() == 0) break;
        node_module = optimizer.modules();
        result.trace.push_back(current_codelength());
    }

    std::vector<std::uint32_t> labels(n);
    for (NodeId v = 0; v < n; ++v) labels[v] = node_module[rank[v]];
    result.partition = Partition::from_labels(layer, labels);
    result.final_codelength = result.trace.back();
    return result;
}

Partition cluster_layer(const MultilayerNetwork& net, Layer layer, double teleport,
                        std::uint64_t seed) {
    InfomapOptions options;
    options.teleport = teleport;
    options.seed = seed;
    return run_infomap(net, layer, options).partition;
}

Partition connected_components(const MultilayerNetwork& net, Layer layer) {
    check_source_layer(layer);
    std::vector<std::uint32_t> parent(net.node_count());
    std::iota(parent.begin(), parent.end(), 0u);
    const auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : net.edges(layer)) {
        const auto a = find(e.src);
        const auto b = find(e.dst);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::uint32_t> labels(net.node_count());
    for (std::uint32_t v = 0; v < labels.size(); ++v) labels[v] = find(v);
    return Partition::from_labels(layer, labels);
}

Clusterer infomap_clusterer(double teleport, std::uint64_t seed) {
    return [teleport, seed](const MultilayerNetwork& net, Layer layer) {
        return cluster_layer(net, layer, teleport, seed);
    };
}

Clusterer components_clusterer() {
    return [](const MultilayerNetwork& net, Layer layer) { return connected_components(net, layer); };
}

AugmentedNetwork::AugmentedNetwork(const MultilayerNetwork& base, Partition part_r, Partition part_m)
    : base_(&base), part_r_(std::move(part_r)), part_m_(std::move(part_m)) {
    if (part_r_.layer != Layer::R || part_m_.layer != Layer::M) {
        throw DomainError("community", "augmentation needs one R and one M partition");
    }
    part_r_.validate(base.node_count());
    part_m_.validate(base.node_count());
    index_r_ = build_index(part_r_);
    index_m_ = build_index(part_m_);
}

AugmentedNetwork::Index AugmentedNetwork::build_index(const Partition& p) {
    Index idx;
    idx.offsets.assign(p.cluster_count + 1, 0);
    for (auto c : p.assignment) ++idx.offsets[c + 1];
    for (std::size_t c = 0; c < p.cluster_count; ++c) idx.offsets[c + 1] += idx.offsets[c];
    idx.nodes.resize(p.assignment.size());
    auto pos = idx.offsets;
    for (NodeId v = 0; v < p.assignment.size(); ++v) idx.nodes[pos[p.assignment[v]]++] = v;
    return idx;
}

const Partition& AugmentedNetwork::partition(Layer source) const {
    check_source_layer(source);
    return source == Layer::R ? part_r_ : part_m_;
}

const AugmentedNetwork::Index& AugmentedNetwork::index(Layer source) const {
    check_source_layer(source);
    return source == Layer::R ? index_r_ : index_m_;
}

std::span<const NodeId> AugmentedNetwork::members(Layer source, ClusterId cluster) const {
    const auto& idx = index(source);
    if (cluster + 1 >= idx.offsets.size()) {
        throw BoundsError("community", "cluster " + std::to_string(cluster) + " out of range");
    }
    return {idx.nodes.data() + idx.offsets[cluster], idx.nodes.data() + idx.offsets[cluster + 1]};
}

AugmentedNetwork augment(const MultilayerNetwork& net, Partition part_r, Partition part_m) {
    return AugmentedNetwork(net, std::move(part_r), std::move(part_m));
}

}  // namespace twoway
