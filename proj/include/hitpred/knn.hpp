#pragma once

#include "hitpred/classifiers.hpp"
#include "hitpred/matrix.hpp"

namespace hitpred::classifiers {

// Score = fraction of the k nearest training rows (Euclidean) labeled hit.
// Equal distances go to the lower row index.
class KnnClassifier final : public Classifier {
public:
    KnnClassifier(const featureng::FeatureMatrix& train, const KnnParams& params);
    KnnClassifier(std::vector<std::string> columns, const nlohmann::json& state);

    ModelKind kind() const override { return ModelKind::knn; }
    int k() const { return k_; }

protected:
    double score_row(std::span<const double> x) const override;
    nlohmann::json state_json() const override;

private:
    Matrix rows_;
    std::vector<int> labels_;
    int k_ = 1;
};

}  // namespace hitpred::classifiers
