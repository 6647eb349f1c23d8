#pragma once

#include "hitpred/classifiers.hpp"
#include "hitpred/matrix.hpp"

#include <span>
#include <vector>

namespace hitpred::classifiers {

namespace logistic {

// Summed log-loss: sum_i log(1 + exp(eta_i)) - y_i eta_i, eta = X w + b.
double log_loss(const Matrix& X, std::span<const int> y, std::span<const double> w, double b);

// log_loss + lambda * sum_j |w_j| (intercept unpenalized).
double penalized_objective(const Matrix& X, std::span<const int> y, std::span<const double> w, double b,
                           double lambda);

// Gradient of log_loss with respect to w (written to grad_w) and b (returned).
double log_loss_gradient(const Matrix& X, std::span<const int> y, std::span<const double> w, double b,
                         std::span<double> grad_w);

struct IrlsResult {
    std::vector<double> weights;
    double intercept = 0;
    int iterations = 0;
    bool converged = false;
    // Penalized objective at the start and after every accepted step.
    std::vector<double> objective_trace;
};

// Proximal Newton (IRLS) for L1-penalized logistic regression. Each outer
// step builds the weighted least-squares approximation at the current
// iterate, minimizes it plus the L1 term by cyclic coordinate descent with
// soft-thresholding, then halves the step until the penalized objective does
// not rise. Stops when the largest coefficient change is below tol.
IrlsResult fit_irls(const Matrix& X, std::span<const int> y, double lambda, int max_iter, double tol);

}  // namespace logistic

class LogisticRegressionClassifier final : public Classifier {
public:
    LogisticRegressionClassifier(const featureng::FeatureMatrix& train, const LrParams& params);
    LogisticRegressionClassifier(std::vector<std::string> columns, const nlohmann::json& state);

    ModelKind kind() const override { return ModelKind::lr; }
    const std::vector<double>& weights() const { return weights_; }
    double intercept() const { return intercept_; }
    const logistic::IrlsResult& fit_info() const { return info_; }

protected:
    double score_row(std::span<const double> x) const override;
    nlohmann::json state_json() const override;

private:
    std::vector<double> weights_;
    double intercept_ = 0;
    logistic::IrlsResult info_;
};

}  // namespace hitpred::classifiers
