#include "hitpred/logistic_regression.hpp"

#include "hitpred/error.hpp"
#include "hitpred/log.hpp"

#include <algorithm>
#include <cmath>

namespace hitpred::classifiers {
namespace logistic {
namespace {

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t))); }

double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double linear(std::span<const double> x, std::span<const double> w, double b) {
    double s = b;
    for (std::size_t j = 0; j < w.size(); ++j) s += x[j] * w[j];
    return s;
}

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

// Floor on IRLS weights p(1-p) so separable data keeps a finite working response.
constexpr double kMinWeight = 1e-10;
constexpr int kMaxInnerSweeps = 1000;
constexpr int kMaxHalvings = 60;

}  // namespace

double log_loss(const Matrix& X, std::span<const int> y, std::span<const double> w, double b) {
    double s = 0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double eta = linear(X.row(i), w, b);
        s += softplus(eta) - y[i] * eta;
    }
    return s;
}

double penalized_objective(const Matrix& X, std::span<const int> y, std::span<const double> w, double b,
                           double lambda) {
    double l1 = 0;
    for (double v : w) l1 += std::fabs(v);
    return log_loss(X, y, w, b) + lambda * l1;
}

double log_loss_gradient(const Matrix& X, std::span<const int> y, std::span<const double> w, double b,
                         std::span<double> grad_w) {
    std::fill(grad_w.begin(), grad_w.end(), 0.0);
    double grad_b = 0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto x = X.row(i);
        const double r = sigmoid(linear(x, w, b)) - y[i];
        for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += r * x[j];
        grad_b += r;
    }
    return grad_b;
}

IrlsResult fit_irls(const Matrix& X, std::span<const int> y, double lambda, int max_iter, double tol) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    IrlsResult res;
    res.weights.assign(d, 0.0);
    double& b = res.intercept;
    auto& w = res.weights;

    double objective = penalized_objective(X, y, w, b, lambda);
    res.objective_trace.push_back(objective);

    std::vector<double> eta(n), weight(n), resid(n), w_new(d);
    for (int iter = 0; iter < max_iter; ++iter) {
        res.iterations = iter + 1;
        for (std::size_t i = 0; i < n; ++i) {
            eta[i] = linear(X.row(i), w, b);
            const double p = sigmoid(eta[i]);
            weight[i] = std::max(p * (1 - p), kMinWeight);
            // Residual of the working response z = eta + (y - p) / W against eta.
            resid[i] = (y[i] - p) / weight[i];
        }

        // Coordinate descent on 1/2 sum W (z - b - x.w)^2 + lambda |w|_1.
        w_new = w;
        double b_new = b;
        double weight_sum = 0;
        for (double v : weight) weight_sum += v;
        for (int sweep = 0; sweep < kMaxInnerSweeps; ++sweep) {
            double max_delta = 0;
            double num = 0;
            for (std::size_t i = 0; i < n; ++i) num += weight[i] * resid[i];
            const double db = num / weight_sum;
            b_new += db;
            for (std::size_t i = 0; i < n; ++i) resid[i] -= db;
            max_delta = std::max(max_delta, std::fabs(db));

            for (std::size_t j = 0; j < d; ++j) {
                double a = 0, c = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double xij = X(i, j);
                    a += weight[i] * xij * xij;
                    c += weight[i] * xij * (resid[i] + xij * w_new[j]);
                }
                const double updated = a > 0 ? soft_threshold(c, lambda) / a : 0.0;
                const double dw = updated - w_new[j];
                if (dw != 0) {
                    for (std::size_t i = 0; i < n; ++i) resid[i] -= X(i, j) * dw;
                    w_new[j] = updated;
                }
                max_delta = std::max(max_delta, std::fabs(dw));
            }
            if (max_delta < tol * 0.1) break;
        }

        // Backtracking along the proposed direction.
        double t = 1.0;
        std::vector<double> w_try(d);
        double b_try = b, obj_try = objective;
        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h) {
            for (std::size_t j = 0; j < d; ++j) w_try[j] = w[j] + t * (w_new[j] - w[j]);
            b_try = b + t * (b_new - b);
            obj_try = penalized_objective(X, y, w_try, b_try, lambda);
            if (obj_try <= objective) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            res.converged = true;
            break;
        }

        double change = std::fabs(b_try - b);
        for (std::size_t j = 0; j < d; ++j) change = std::max(change, std::fabs(w_try[j] - w[j]));
        w = w_try;
        b = b_try;
        objective = obj_try;
        res.objective_trace.push_back(objective);
        if (change < tol) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged) {
        log::warn("logistic regression did not converge in " + std::to_string(max_iter) +
                  " iterations; returning the current iterate");
    }
    return res;
}

}  // namespace logistic

LogisticRegressionClassifier::LogisticRegressionClassifier(const featureng::FeatureMatrix& train,
                                                           const LrParams& params)
    : Classifier(train.column_names) {
    const double lambda = params.resolved_lambda();
    if (!(lambda >= 0) || !std::isfinite(lambda)) throw ParameterError("L1 strength must be finite and >= 0");
    if (params.max_iter < 1) throw ParameterError("logistic regression needs max_iter >= 1");
    bool has0 = false, has1 = false;
    for (int l : train.labels) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw DataError("logistic regression needs both classes in the training data");

    info_ = logistic::fit_irls(train.values, train.labels, lambda, params.max_iter, params.tol);
    weights_ = info_.weights;
    intercept_ = info_.intercept;
}

LogisticRegressionClassifier::LogisticRegressionClassifier(std::vector<std::string> columns,
                                                           const nlohmann::json& state)
    : Classifier(std::move(columns)) {
    weights_ = state.at("weights").get<std::vector<double>>();
    intercept_ = state.at("intercept").get<double>();
    if (weights_.size() != this->columns().size()) throw DataError("logistic regression state width mismatch");
}

double LogisticRegressionClassifier::score_row(std::span<const double> x) const {
    return logistic::sigmoid(logistic::linear(x, weights_, intercept_));
}

nlohmann::json LogisticRegressionClassifier::state_json() const {
    return {{"weights", weights_}, {"intercept", intercept_}, {"iterations", info_.iterations},
            {"converged", info_.converged}};
}

}  // namespace hitpred::classifiers
