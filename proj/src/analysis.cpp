#include "twoway/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

namespace twoway {
namespace {

using Pair = std::pair<std::int64_t, std::int64_t>;

// Sum over runs of equal keys of run * (run - 1) / 2.
template <class It, class Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
    std::int64_t total = 0;
    while (first != last) {
        It run_end = first + 1;
        while (run_end != last && eq(*first, *run_end)) ++run_end;
        const auto run = static_cast<std::int64_t>(run_end - first);
        total += run * (run - 1) / 2;
        first = run_end;
    }
    return total;
}

// Stable merge sort on .second, returning the number of inversions.
std::int64_t sort_count_swaps(std::vector<Pair>& v, std::vector<Pair>& buf, std::size_t lo,
                              std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = sort_count_swaps(v, buf, lo, mid) + sort_count_swaps(v, buf, mid, hi);
    std::size_t i = lo;
    std::size_t j = mid;
    std::size_t k = lo;
    while (i < mid && j < hi) {
        if (v[j].second < v[i].second) {
            swaps += static_cast<std::int64_t>(mid - i);
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

void check_pair(Layer a, Layer b) {
    if (a == b) throw DomainError("evalharness", "layer pair must name two different layers");
}

std::unordered_set<std::uint64_t> edge_set(const MultilayerNetwork& net, Layer layer) {
    std::unordered_set<std::uint64_t> keys;
    keys.reserve(net.edge_count(layer) * 2);
    for (const auto& e : net.edges(layer)) keys.insert(edge_key(e.src, e.dst));
    return keys;
}

}  // namespace

double kendall_tau_b(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys) {
    if (xs.size() != ys.size()) throw DomainError("evalharness", "tau_b sequences differ in length");
    if (xs.size() < 2) throw DomainError("evalharness", "tau_b needs at least two observations");
    std::vector<Pair> v(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) v[i] = {xs[i], ys[i]};
    std::sort(v.begin(), v.end());

    const auto n = static_cast<std::int64_t>(v.size());
    const std::int64_t n0 = n * (n - 1) / 2;
    const std::int64_t n1 =
        tied_pairs(v.begin(), v.end(), [](const Pair& a, const Pair& b) { return a.first == b.first; });
    const std::int64_t n3 = tied_pairs(v.begin(), v.end(), [](const Pair& a, const Pair& b) { return a == b; });
    std::vector<Pair> buf(v.size());
    const std::int64_t swaps = sort_count_swaps(v, buf, 0, v.size());
    const std::int64_t n2 =
        tied_pairs(v.begin(), v.end(), [](const Pair& a, const Pair& b) { return a.second == b.second; });

    if (n0 == n1 || n0 == n2) {
        throw UndefinedMetricError("evalharness", "tau_b is undefined for a constant sequence");
    }
    // concordant - discordant
    const std::int64_t s = n0 - n1 - n2 + n3 - 2 * swaps;
    const long double denom = std::sqrt(static_cast<long double>(n0 - n1) * static_cast<long double>(n0 - n2));
    return static_cast<double>(static_cast<long double>(s) / denom);
}

std::string_view to_string(DegreeDirection d) noexcept { return d == DegreeDirection::In ? "in" : "out"; }

std::vector<std::int64_t> layer_degrees(const MultilayerNetwork& net, Layer layer, DegreeDirection dir) {
    const auto& adj = dir == DegreeDirection::In ? net.in(layer) : net.out(layer);
    std::vector<std::int64_t> deg(net.node_count());
    for (NodeId v = 0; v < deg.size(); ++v) deg[v] = static_cast<std::int64_t>(adj.degree(v));
    return deg;
}

double layer_degree_correlation(const MultilayerNetwork& net, Layer a, Layer b, DegreeDirection dir) {
    check_pair(a, b);
    const auto da = layer_degrees(net, a, dir);
    const auto db = layer_degrees(net, b, dir);
    std::vector<std::int64_t> xs;
    std::vector<std::int64_t> ys;
    for (std::size_t i = 0; i < da.size(); ++i) {
        if (da[i] > 0 && db[i] > 0) {
            xs.push_back(da[i]);
            ys.push_back(db[i]);
        }
    }
    if (xs.size() < 2) {
        throw DomainError("evalharness", "fewer than two nodes are active in both " +
                                             std::string(to_string(a)) + " and " +
                                             std::string(to_string(b)));
    }
    return kendall_tau_b(xs, ys);
}

double activity_hamming(const MultilayerNetwork& net, Layer a, Layer b, DegreeDirection dir) {
    check_pair(a, b);
    if (net.node_count() == 0) return 0.0;
    const auto da = layer_degrees(net, a, dir);
    const auto db = layer_degrees(net, b, dir);
    std::size_t differ = 0;
    for (std::size_t i = 0; i < da.size(); ++i) differ += (da[i] > 0) != (db[i] > 0);
    return static_cast<double>(differ) / static_cast<double>(net.node_count());
}

std::size_t common_edges(const MultilayerNetwork& net, Layer a, Layer b) {
    check_pair(a, b);
    std::size_t n = 0;
    for (const auto& e : net.edges(a)) n += net.has_edge(b, e.src, e.dst);
    return n;
}

FOverlap f_overlap_summary(const MultilayerNetwork& net) {
    FOverlap o;
    const auto m = edge_set(net, Layer::M);
    const auto r = edge_set(net, Layer::R);
    for (const auto& e : net.edges(Layer::F)) {
        const auto key = edge_key(e.src, e.dst);
        const bool in_m = m.contains(key);
        const bool in_r = r.contains(key);
        ++o.f_total;
        o.in_m += in_m;
        o.in_r += in_r;
        o.in_either += in_m || in_r;
        o.in_all += in_m && in_r;
        o.in_neither += !in_m && !in_r;
    }
    return o;
}

CorrelationReport correlation_report(const MultilayerNetwork& net) {
    CorrelationReport report;
    const auto tau = [&](Layer a, Layer b, DegreeDirection d) -> std::optional<double> {
        try {
            return layer_degree_correlation(net, a, b, d);
        } catch (const UndefinedMetricError&) {
            return std::nullopt;
        } catch (const DomainError&) {
            return std::nullopt;
        }
    };
    for (const auto& [a, b] : {std::pair{Layer::M, Layer::R}, std::pair{Layer::M, Layer::F},
                               std::pair{Layer::R, Layer::F}}) {
        LayerPairCorrelation row;
        row.a = a;
        row.b = b;
        row.tau_in = tau(a, b, DegreeDirection::In);
        row.tau_out = tau(a, b, DegreeDirection::Out);
        row.hamming_in = activity_hamming(net, a, b, DegreeDirection::In);
        row.hamming_out = activity_hamming(net, a, b, DegreeDirection::Out);
        row.common = common_edges(net, a, b);
        report.pairs.push_back(row);
    }
    report.overlap = f_overlap_summary(net);
    return report;
}

double EmbeddednessHistogram::pct_of_positives(const EmbeddednessBin& b) const noexcept {
    return positives ? 100.0 * static_cast<double>(b.positives) / static_cast<double>(positives) : 0.0;
}

double EmbeddednessHistogram::pct_of_negatives(const EmbeddednessBin& b) const noexcept {
    return negatives ? 100.0 * static_cast<double>(b.negatives) / static_cast<double>(negatives) : 0.0;
}

EmbeddednessHistogram embeddedness_histogram(const MultilayerNetwork& net) {
    if (net.edge_count(Layer::F) == 0) {
        throw DomainError("evalharness", "embeddedness histogram needs a non-empty F layer");
    }
    const MaskedView full(net);
    std::map<std::size_t, EmbeddednessBin> bins;
    EmbeddednessHistogram hist;
    for (const auto& e : net.edges(Layer::F)) {
        const auto emb = embeddedness(full.hiding(e.src, e.dst), e.src, e.dst);
        auto& bin = bins[emb];
        bin.embeddedness = emb;
        if (*e.sign == Sign::Positive) {
            ++bin.positives;
            ++hist.positives;
        } else {
            ++bin.negatives;
            ++hist.negatives;
        }
    }
    for (const auto& [k, bin] : bins) hist.bins.push_back(bin);
    return hist;
}

}  // namespace twoway
