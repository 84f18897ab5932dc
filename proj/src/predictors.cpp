#include "twoway/predictors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace twoway {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double hinge(double m) { return m < 1.0 ? 1.0 - m : 0.0; }

void check_labels(const DenseMatrix& x, std::span<const Sign> y) {
    if (x.rows != y.size()) {
        throw DomainError("predictors", "feature rows and labels differ in length");
    }
}

}  // namespace

void DenseMatrix::check_width(std::size_t width) const {
    if (width != cols) {
        throw DomainError("predictors", "row width " + std::to_string(width) + " != " +
                                            std::to_string(cols) + " columns");
    }
}

void DenseMatrix::append(std::span<const double> values) {
    if (rows == 0 && cols == 0) cols = values.size();
    check_width(values.size());
    data.insert(data.end(), values.begin(), values.end());
    ++rows;
}

Standardizer Standardizer::fit(const DenseMatrix& rows) {
    if (rows.rows == 0) throw DegenerateTrainingError("predictors", "cannot standardize zero rows");
    Standardizer s;
    s.mean.assign(rows.cols, 0.0);
    s.stddev.assign(rows.cols, 0.0);
    const double n = static_cast<double>(rows.rows);
    for (std::size_t i = 0; i < rows.rows; ++i) {
        for (std::size_t j = 0; j < rows.cols; ++j) s.mean[j] += rows.at(i, j);
    }
    for (double& m : s.mean) m /= n;
    for (std::size_t i = 0; i < rows.rows; ++i) {
        for (std::size_t j = 0; j < rows.cols; ++j) {
            const double d = rows.at(i, j) - s.mean[j];
            s.stddev[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < rows.cols; ++j) {
        const double sd = std::sqrt(s.stddev[j] / n);
        // Rounding leaves a tiny spread on constant non-integer columns.
        s.stddev[j] = sd > 1e-12 * (1.0 + std::abs(s.mean[j])) ? sd : 0.0;
    }
    return s;
}

std::vector<double> Standardizer::transform(std::span<const double> row) const {
    if (row.size() != mean.size()) {
        throw DomainError("predictors", "row width does not match the standardizer");
    }
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] = stddev[j] > 0.0 ? (row[j] - mean[j]) / stddev[j] : 0.0;
    }
    return out;
}

void Standardizer::transform_in_place(DenseMatrix& rows) const {
    if (rows.cols != mean.size()) {
        throw DomainError("predictors", "matrix width does not match the standardizer");
    }
    for (std::size_t i = 0; i < rows.rows; ++i) {
        auto r = rows.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            r[j] = stddev[j] > 0.0 ? (r[j] - mean[j]) / stddev[j] : 0.0;
        }
    }
}

double LinearModel::margin(std::span<const double> row) const {
    if (row.size() != weights.size()) {
        throw DomainError("predictors", "row has " + std::to_string(row.size()) +
                                            " features, model expects " +
                                            std::to_string(weights.size()));
    }
    return dot(weights, row) + bias;
}

Sign predict(const LinearModel& model, std::span<const double> row) {
    return model.margin(row) >= 0.0 ? Sign::Positive : Sign::Negative;
}

LinearModel train_svm(const DenseMatrix& x, std::span<const Sign> y, const SvmParams& params) {
    check_labels(x, y);
    if (!(params.lambda > 0.0) || params.epochs == 0) {
        throw DomainError("predictors", "SVM needs lambda > 0 and at least one epoch");
    }
    const auto positives =
        static_cast<std::size_t>(std::count(y.begin(), y.end(), Sign::Positive));
    const std::size_t n = y.size();
    if (positives == 0 || positives == n) {
        throw DegenerateTrainingError("predictors", "training labels contain a single class");
    }

    LinearModel model;
    model.params = params;
    if (params.class_weighted) {
        model.weight_positive = static_cast<double>(n) / (2.0 * static_cast<double>(positives));
        model.weight_negative = static_cast<double>(n) / (2.0 * static_cast<double>(n - positives));
    }

    const std::size_t d = x.cols;
    std::vector<double> w(d + 1, 0.0);  // last entry: bias
    std::vector<double> avg(d + 1, 0.0);
    std::size_t averaged = 0;
    const std::size_t total_steps = params.epochs * n;
    const std::size_t average_from = total_steps / 2;
    // The iterate is kept as scale * w so the shrink step is O(1).
    double scale = 1.0;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(params.seed);
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (params.lambda * static_cast<double>(t));
            const auto row = x.row(i);
            const double yi = y[i] == Sign::Positive ? 1.0 : -1.0;
            const double m = yi * scale * (dot(std::span<const double>(w).first(d), row) + w[d]);
            const double shrink = 1.0 - eta * params.lambda;
            if (shrink <= 0.0) {
                std::fill(w.begin(), w.end(), 0.0);
                scale = 1.0;
            } else {
                scale *= shrink;
            }
            if (m < 1.0) {
                const double c = yi > 0 ? model.weight_positive : model.weight_negative;
                const double step = eta * c * yi / scale;
                for (std::size_t j = 0; j < d; ++j) w[j] += step * row[j];
                w[d] += step;
            }
            if (scale < 1e-100) {
                for (double& wj : w) wj *= scale;
                scale = 1.0;
            }
            if (t > average_from) {
                ++averaged;
                const double r = 1.0 / static_cast<double>(averaged);
                for (std::size_t j = 0; j <= d; ++j) avg[j] += (scale * w[j] - avg[j]) * r;
            }
        }
    }
    model.weights.assign(avg.begin(), avg.begin() + static_cast<std::ptrdiff_t>(d));
    model.bias = avg[d];
    return model;
}

double svm_objective(const LinearModel& model, const DenseMatrix& x, std::span<const Sign> y) {
    check_labels(x, y);
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const bool pos = y[i] == Sign::Positive;
        const double c = pos ? model.weight_positive : model.weight_negative;
        loss += c * hinge((pos ? 1.0 : -1.0) * model.margin(x.row(i)));
    }
    const double reg = 0.5 * model.params.lambda * dot(model.weights, model.weights);
    return reg + (x.rows ? loss / static_cast<double>(x.rows) : 0.0);
}

std::vector<std::uint64_t> nbsp_features(const MaskedView& view, NodeId u, NodeId v) {
    const auto& net = view.base();
    net.check_node(u);
    net.check_node(v);
    if (u == v) throw DomainError("predictors", "initiator and recipient must differ");

    std::vector<std::uint64_t> out(kNbspFeatureCount, 0);
    const auto count = [&](NodeId node, const RelationStep& step) {
        std::uint64_t c = 0;
        view.for_each_neighbor(node, step, [&](NodeId) { ++c; });
        return c;
    };
    const auto fwd = [](Sign s) { return RelationStep::forward(Layer::F, s); };
    const auto inv = [](Sign s) { return RelationStep::inverse(Layer::F, s); };
    out[0] = count(v, inv(Sign::Positive));
    out[1] = count(v, inv(Sign::Negative));
    out[2] = count(u, fwd(Sign::Positive));
    out[3] = count(u, fwd(Sign::Negative));
    out[4] = out[0] + out[1];
    out[5] = out[2] + out[3];
    out[6] = embeddedness(view, u, v);

    // (neighbor, code) for every visible F edge at an endpoint. For u the
    // code orients u -> w as 0; for v it orients w -> v as 0.
    const auto incident = [&](NodeId node, bool node_is_source) {
        std::vector<std::pair<NodeId, unsigned>> edges;
        for (Sign s : {Sign::Positive, Sign::Negative}) {
            const unsigned bit = s == Sign::Negative ? 1u : 0u;
            view.for_each_neighbor(node, fwd(s), [&](NodeId w) {
                edges.emplace_back(w, (node_is_source ? 0u : 2u) + bit);
            });
            view.for_each_neighbor(node, inv(s), [&](NodeId w) {
                edges.emplace_back(w, (node_is_source ? 2u : 0u) + bit);
            });
        }
        std::sort(edges.begin(), edges.end());
        return edges;
    };
    const auto eu = incident(u, true);
    const auto ev = incident(v, false);
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < eu.size() && j < ev.size()) {
        const NodeId wu = eu[i].first;
        const NodeId wv = ev[j].first;
        if (wu < wv) {
            ++i;
        } else if (wv < wu) {
            ++j;
        } else {
            std::size_t i_end = i;
            std::size_t j_end = j;
            while (i_end < eu.size() && eu[i_end].first == wu) ++i_end;
            while (j_end < ev.size() && ev[j_end].first == wu) ++j_end;
            if (wu != u && wu != v) {
                for (std::size_t a = i; a < i_end; ++a) {
                    for (std::size_t b = j; b < j_end; ++b) {
                        ++out[7 + eu[a].second * 4 + ev[b].second];
                    }
                }
            }
            i = i_end;
            j = j_end;
        }
    }
    return out;
}

std::vector<std::string> nbsp_columns() {
    std::vector<std::string> names{"d+in(v)", "d-in(v)", "d+out(u)", "d-out(u)",
                                   "din(v)",  "dout(u)", "emb(u,v)"};
    const std::array<std::string, 4> uw{"u>w+", "u>w-", "w>u+", "w>u-"};
    const std::array<std::string, 4> wv{"w>v+", "w>v-", "v>w+", "v>w-"};
    for (const auto& a : uw) {
        for (const auto& b : wv) names.push_back("tri(" + a + "," + b + ")");
    }
    return names;
}

double MfModel::margin(NodeId src, NodeId dst) const {
    if (src >= node_count || dst >= node_count) {
        throw BoundsError("predictors", "node id outside the factorized range");
    }
    double s = 0.0;
    for (std::size_t r = 0; r < rank; ++r) s += u[src * rank + r] * v[dst * rank + r];
    return s;
}

MfModel train_mf(std::size_t node_count, std::span<const SignedEdge> train, const MfParams& params) {
    if (train.empty()) throw DegenerateTrainingError("predictors", "MF needs at least one training edge");
    if (params.rank == 0 || params.lambda < 0.0 || !(params.learning_rate > 0.0)) {
        throw DomainError("predictors", "MF needs rank > 0, lambda >= 0 and a positive learning rate");
    }
    MfModel model;
    model.node_count = node_count;
    model.rank = params.rank;
    model.params = params;
    const std::size_t k = params.rank;
    Rng rng(params.seed);
    model.u.resize(node_count * k);
    model.v.resize(node_count * k);
    for (double& x : model.u) x = rng.uniform(-0.1, 0.1);
    for (double& x : model.v) x = rng.uniform(-0.1, 0.1);

    std::vector<std::uint32_t> out_deg(node_count, 0);
    std::vector<std::uint32_t> in_deg(node_count, 0);
    for (const auto& e : train) {
        if (e.src >= node_count || e.dst >= node_count || !e.sign) {
            throw DomainError("predictors", "MF training edges must be signed and in range");
        }
        ++out_deg[e.src];
        ++in_deg[e.dst];
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        if (out_deg[i] == 0) std::fill_n(model.u.begin() + static_cast<std::ptrdiff_t>(i * k), k, 0.0);
        if (in_deg[i] == 0) std::fill_n(model.v.begin() + static_cast<std::ptrdiff_t>(i * k), k, 0.0);
    }

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> ui(k);
    const double eta = params.learning_rate;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t idx : order) {
            const auto& e = train[idx];
            double* pu = model.u.data() + e.src * k;
            double* pv = model.v.data() + e.dst * k;
            const double su = std::max(0.0, 1.0 - 2.0 * eta * params.lambda / out_deg[e.src]);
            const double sv = std::max(0.0, 1.0 - 2.0 * eta * params.lambda / in_deg[e.dst]);
            double m = 0.0;
            for (std::size_t r = 0; r < k; ++r) {
                pu[r] *= su;
                pv[r] *= sv;
                m += pu[r] * pv[r];
            }
            const double s = *e.sign == Sign::Positive ? 1.0 : -1.0;
            const double slack = 1.0 - s * m;
            if (slack <= 0.0) continue;
            const double g = 2.0 * eta * slack * s;
            std::copy(pu, pu + k, ui.begin());
            for (std::size_t r = 0; r < k; ++r) {
                pu[r] += g * pv[r];
                pv[r] += g * ui[r];
            }
        }
    }
    return model;
}

double mf_objective(const MfModel& model, std::span<const SignedEdge> edges) {
    double loss = 0.0;
    for (const auto& e : edges) {
        const double s = e.sign && *e.sign == Sign::Negative ? -1.0 : 1.0;
        const double slack = std::max(0.0, 1.0 - s * model.margin(e.src, e.dst));
        loss += slack * slack;
    }
    double reg = 0.0;
    for (double x : model.u) reg += x * x;
    for (double x : model.v) reg += x * x;
    return loss + model.params.lambda * reg;
}

}  // namespace twoway
