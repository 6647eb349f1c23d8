#pragma once

#include "hitpred/classifiers.hpp"

#include <array>

namespace hitpred::classifiers {

// Gaussian naive Bayes. Each per-feature class-conditional density is
// floored at the configured default probability before taking logs.
class NaiveBayesClassifier final : public Classifier {
public:
    NaiveBayesClassifier(const featureng::FeatureMatrix& train, const NbParams& params);
    NaiveBayesClassifier(std::vector<std::string> columns, const nlohmann::json& state);

    ModelKind kind() const override { return ModelKind::nb; }

    struct ClassStats {
        double prior = 0;
        std::vector<double> mean;
        std::vector<double> variance;
    };
    const ClassStats& stats(int label) const { return classes_[label]; }

    // Floored Gaussian density used for one feature.
    double density(int label, std::size_t feature, double x) const;

protected:
    double score_row(std::span<const double> x) const override;
    nlohmann::json state_json() const override;

private:
    std::array<ClassStats, 2> classes_;
    double default_probability_ = 0.031;
};

}  // namespace hitpred::classifiers
