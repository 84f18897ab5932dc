#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "twoway/network.hpp"
#include "twoway/rng.hpp"

namespace twoway {

/// Row-major dense matrix of features.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    void append(std::span<const double> values);
    template <class T>
    void append_counts(std::span<const T> values) {
        if (rows == 0 && cols == 0) cols = values.size();
        check_width(values.size());
        for (const T& x : values) data.push_back(static_cast<double>(x));
        ++rows;
    }

private:
    void check_width(std::size_t width) const;
};

/// Per-column z-scoring with population standard deviation. Constant
/// columns map to 0.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    static Standardizer fit(const DenseMatrix& rows);
    std::vector<double> transform(std::span<const double> row) const;
    void transform_in_place(DenseMatrix& rows) const;
};

struct SvmParams {
    double lambda = 1e-4;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
    /// Class weights N / (2 N_y); false gives both classes weight 1.
    bool class_weighted = true;
};

struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double weight_positive = 1.0;
    double weight_negative = 1.0;
    SvmParams params;

    double margin(std::span<const double> row) const;
};

/// Pegasos: seeded per-epoch shuffles, step 1/(lambda t), bias as a constant
/// feature, and the average of the second half of the iterates returned.
/// Throws DegenerateTrainingError unless both classes are present.
LinearModel train_svm(const DenseMatrix& x, std::span<const Sign> y, const SvmParams& params);

/// (lambda/2)|w|^2 + (1/N) sum c_y max(0, 1 - y (w.x + b)), using the model's class weights.
double svm_objective(const LinearModel& model, const DenseMatrix& x, std::span<const Sign> y);

/// sign(w.x + b) with 0 mapped to +1. Throws DomainError on a width mismatch.
Sign predict(const LinearModel& model, std::span<const double> row);

constexpr std::size_t kNbspFeatureCount = 23;

/// Degree block then 16 signed directed triad counters, on the F layer of
/// the view only. Triad cell a * 4 + b where a = 2 * [w -> u] + [u-w edge
/// negative] and b = 2 * [v -> w] + [w-v edge negative].
std::vector<std::uint64_t> nbsp_features(const MaskedView& view, NodeId u, NodeId v);
std::vector<std::string> nbsp_columns();

struct MfParams {
    std::size_t rank = 20;
    double lambda = 0.1;
    double learning_rate = 0.05;
    std::size_t epochs = 50;
    std::uint64_t seed = 0;
};

struct MfModel {
    std::size_t node_count = 0;
    std::size_t rank = 0;
    std::vector<double> u;  // node_count x rank, initiator factors
    std::vector<double> v;  // node_count x rank, recipient factors
    MfParams params;

    double margin(NodeId src, NodeId dst) const;
    Sign predict(NodeId src, NodeId dst) const {
        return margin(src, dst) >= 0.0 ? Sign::Positive : Sign::Negative;
    }
};

/// SGD on sum (1 - s U_i.V_j)_+^2 + lambda (|U|^2 + |V|^2). Each node's share
/// of the regularizer is spread over its training edges; factors of nodes
/// without training edges are zero.
MfModel train_mf(std::size_t node_count, std::span<const SignedEdge> train, const MfParams& params);
double mf_objective(const MfModel& model, std::span<const SignedEdge> edges);

/// Fair coin.
class RandomPredictor {
public:
    explicit RandomPredictor(std::uint64_t seed) : rng_(seed) {}
    Sign next() { return rng_.bernoulli(0.5) ? Sign::Positive : Sign::Negative; }

private:
    Rng rng_;
};

}  // namespace twoway
