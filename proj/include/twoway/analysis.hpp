#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twoway/network.hpp"

namespace twoway {

/// Tie-corrected Kendall rank correlation, O(n log n). Throws
/// UndefinedMetricError for a constant sequence and DomainError for a length
/// mismatch or fewer than two observations.
double kendall_tau_b(std::span<const std::int64_t> xs, std::span<const std::int64_t> ys);

enum class DegreeDirection : std::uint8_t { In, Out };

std::string_view to_string(DegreeDirection d) noexcept;

/// Distinct-neighbor degree of every node in one layer (F: both signs).
std::vector<std::int64_t> layer_degrees(const MultilayerNetwork& net, Layer layer, DegreeDirection dir);

/// tau_b of the two layers' degree sequences over nodes with nonzero degree
/// in the given direction in both layers.
double layer_degree_correlation(const MultilayerNetwork& net, Layer a, Layer b, DegreeDirection dir);

/// Fraction of nodes active (degree > 0) in exactly one of the two layers.
double activity_hamming(const MultilayerNetwork& net, Layer a, Layer b, DegreeDirection dir);

/// Directed (src, dst) pairs present in both layers, F signs ignored.
std::size_t common_edges(const MultilayerNetwork& net, Layer a, Layer b);

struct FOverlap {
    std::size_t f_total = 0;
    std::size_t in_m = 0;
    std::size_t in_r = 0;
    std::size_t in_either = 0;
    std::size_t in_all = 0;
    std::size_t in_neither = 0;
};

FOverlap f_overlap_summary(const MultilayerNetwork& net);

struct LayerPairCorrelation {
    Layer a = Layer::M;
    Layer b = Layer::R;
    /// Empty when the statistic is undefined on this network.
    std::optional<double> tau_in;
    std::optional<double> tau_out;
    double hamming_in = 0.0;
    double hamming_out = 0.0;
    std::size_t common = 0;
};

struct CorrelationReport {
    std::vector<LayerPairCorrelation> pairs;  // (M, R), (M, F), (R, F)
    FOverlap overlap;
};

CorrelationReport correlation_report(const MultilayerNetwork& net);

struct EmbeddednessBin {
    std::size_t embeddedness = 0;
    std::size_t positives = 0;
    std::size_t negatives = 0;

    std::size_t count() const noexcept { return positives + negatives; }
    double positive_rate() const noexcept {
        return count() ? static_cast<double>(positives) / static_cast<double>(count()) : 0.0;
    }
};

struct EmbeddednessHistogram {
    std::vector<EmbeddednessBin> bins;  // ascending, non-empty bins only
    std::size_t positives = 0;
    std::size_t negatives = 0;

    double pct_of_positives(const EmbeddednessBin& b) const noexcept;
    double pct_of_negatives(const EmbeddednessBin& b) const noexcept;
};

/// Bins every F edge by the embeddedness of its endpoints with that edge
/// hidden. Throws DomainError on an empty F layer.
EmbeddednessHistogram embeddedness_histogram(const MultilayerNetwork& net);

}  // namespace twoway
