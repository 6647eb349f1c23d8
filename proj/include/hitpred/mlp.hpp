#pragma once

#include "hitpred/classifiers.hpp"
#include "hitpred/matrix.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hitpred::classifiers {

// Fully connected sigmoid network with one output unit. Parameters are kept
// in one flat vector: for each layer, its weight matrix (outputs x inputs,
// row-major) followed by its bias vector.
class MlpNetwork {
public:
    MlpNetwork() = default;
    // Layer widths including input and output, e.g. {d, 22, 22, 22, 22, 1}.
    explicit MlpNetwork(std::vector<std::size_t> widths);

    // Weights and biases uniform in [-0.5, 0.5].
    void initialize(std::uint64_t seed);

    const std::vector<std::size_t>& widths() const { return widths_; }
    std::size_t parameter_count() const { return params_.size(); }
    std::span<const double> parameters() const { return params_; }
    std::span<double> parameters() { return params_; }

    double forward(std::span<const double> x) const;

    // Mean binary cross-entropy over the rows of X.
    double loss(const Matrix& X, std::span<const int> y) const;
    // Same loss; writes d loss / d parameters into grad (resized).
    double loss_and_gradient(const Matrix& X, std::span<const int> y, std::vector<double>& grad) const;

private:
    std::vector<std::size_t> widths_;
    std::vector<double> params_;
};

struct MlpTrainingInfo {
    int iterations = 0;
    double final_loss = 0;
};

// Full-batch gradient descent. Stops after max_iter steps or when an
// iteration improves the loss by less than min_improvement. Throws RunError
// if the loss becomes non-finite.
MlpTrainingInfo train_mlp(MlpNetwork& net, const Matrix& X, std::span<const int> y, const MlpParams& params);

class MlpClassifier final : public Classifier {
public:
    MlpClassifier(const featureng::FeatureMatrix& train, const MlpParams& params, std::uint64_t seed);
    MlpClassifier(std::vector<std::string> columns, const nlohmann::json& state);

    ModelKind kind() const override { return ModelKind::mlp; }
    const MlpNetwork& network() const { return net_; }
    const MlpTrainingInfo& training_info() const { return info_; }

protected:
    double score_row(std::span<const double> x) const override;
    nlohmann::json state_json() const override;

private:
    MlpNetwork net_;
    MlpTrainingInfo info_;
};

}  // namespace hitpred::classifiers
