#pragma once

// Uniform contract over the five classifiers: fit on a FeatureMatrix, score
// a row with a hit probability in [0, 1], predict hit when score >= 0.5.

#include "hitpred/featureng.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hitpred::classifiers {

enum class ModelKind { knn, nb, rf, lr, mlp };

inline constexpr std::array<ModelKind, 5> kAllModels = {ModelKind::knn, ModelKind::nb, ModelKind::rf,
                                                        ModelKind::lr, ModelKind::mlp};

std::string_view to_string(ModelKind kind);
// Throws ConfigError for unknown names.
ModelKind parse_model_kind(std::string_view name);

struct KnnParams {
    int k = 1;
};

struct NbParams {
    // Floor applied to every per-feature class-conditional density.
    double default_probability = 0.031;
    double variance_floor = 1e-9;
};

struct RfParams {
    int n_trees = 600;
    // Features tried per node; 0 means floor(sqrt(d)).
    int m_try = 0;
    bool bootstrap = true;
    int min_samples_split = 2;
    // Tree-building threads; 0 means hardware concurrency.
    int threads = 0;
};

struct LrParams {
    // Scale b of the Laplace prior on each weight; L1 strength = 1 / b.
    double laplace_scale = 3.0;
    // Overrides 1 / laplace_scale when set.
    std::optional<double> lambda;
    int max_iter = 100;
    double tol = 1e-8;

    double resolved_lambda() const { return lambda ? *lambda : 1.0 / laplace_scale; }
};

struct MlpParams {
    int hidden_layers = 4;
    int neurons = 22;
    int max_iter = 4500;
    double learning_rate = 0.1;
    double min_improvement = 1e-10;
};

struct ModelSpec {
    ModelKind kind = ModelKind::lr;
    KnnParams knn;
    NbParams nb;
    RfParams rf;
    LrParams lr;
    MlpParams mlp;
    std::uint64_t seed = 0;

    // Throws ParameterError if a hyperparameter is invalid for `features` inputs.
    void validate(std::size_t features) const;
};

nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& j);

inline int threshold_score(double score) { return score >= 0.5 ? 1 : 0; }

class Classifier {
public:
    virtual ~Classifier() = default;

    virtual ModelKind kind() const = 0;
    const std::vector<std::string>& columns() const { return columns_; }

    // x must follow columns() order; throws ConsistencyError on a width mismatch.
    double score(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return threshold_score(score(x)); }

    // Throws ConsistencyError unless m has exactly the training columns.
    std::vector<double> score_all(const featureng::FeatureMatrix& m) const;
    std::vector<int> predict_all(const featureng::FeatureMatrix& m) const;

    nlohmann::json to_json() const;

protected:
    explicit Classifier(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    virtual double score_row(std::span<const double> x) const = 0;
    virtual nlohmann::json state_json() const = 0;

private:
    std::vector<std::string> columns_;
};

// Throws ParameterError / DataError when the data cannot support the model
// (single class for NB and LR, k > n for kNN, ...).
std::unique_ptr<Classifier> fit(const ModelSpec& spec, const featureng::FeatureMatrix& train);

// Rebuilds a model saved with Classifier::to_json(); scores are bit-identical.
std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j);

}  // namespace hitpred::classifiers
