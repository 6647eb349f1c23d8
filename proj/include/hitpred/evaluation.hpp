#pragma once

// Train/test splitting, k-fold cross-validation and the accuracy / AUC /
// confusion metrics.

#include "hitpred/classifiers.hpp"
#include "hitpred/featureng.hpp"
#include "hitpred/smote.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace hitpred::evaluation {

struct SplitPlan {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
    double ratio = 0.8;
    bool stratified = true;
    std::uint64_t seed = 0;
};

// Shuffles each class (or the whole set when unstratified) with the seed and
// sends the first round(ratio * size) rows to train. Throws DataError when
// a class has fewer than 2 rows and ParameterError unless 0 < ratio < 1.
SplitPlan split(std::span<const int> labels, double ratio = 0.8, bool stratified = true, std::uint64_t seed = 0);

struct Fold {
    std::vector<std::size_t> train;     // positions, ascending
    std::vector<std::size_t> validate;  // positions, ascending
};

// Positions 0..n-1 dealt round-robin into k folds after a seeded shuffle of
// each class (stratified) or of all positions. Fold sizes differ by at most
// one, as do per-class counts. Throws when k < 2 or n < k.
std::vector<Fold> kfold(std::span<const int> labels, int k = 5, bool stratified = true, std::uint64_t seed = 0);

double accuracy(std::span<const int> predictions, std::span<const int> labels);

// Mann-Whitney AUC with mid-ranks for ties. Throws DataError unless both
// classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::size_t total() const { return tp + fp + tn + fn; }
    bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const int> predictions, std::span<const int> labels);

struct RocPoint {
    double threshold = 0;  // predict hit when score >= threshold
    double fpr = 0;
    double tpr = 0;
};

// One point per distinct score plus the (0, 0) start at threshold +inf.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
double roc_area(std::span<const RocPoint> points);

struct FoldMetrics {
    double accuracy = 0;
    double auc = 0;  // NaN when a validation fold holds a single class
};

struct EvalReport {
    double accuracy = 0;
    double auc = 0;
    Confusion confusion;
    std::vector<FoldMetrics> per_fold;
    std::vector<RocPoint> roc_points;

    double cv_accuracy() const;
    double cv_auc() const;
};

// Held-out metrics from scores thresholded at 0.5.
EvalReport evaluate_scores(std::span<const double> scores, std::span<const int> labels);

nlohmann::json to_json(const EvalReport& report);
void write_roc_csv(std::ostream& out, std::span<const RocPoint> points);

double mean_accuracy(std::span<const FoldMetrics> folds);
// Mean over folds with a defined AUC.
double mean_auc(std::span<const FoldMetrics> folds);

// Trains on each fold's training part (oversampled with per_fold_smote when
// given, seeded per fold) and scores its validation part.
std::vector<FoldMetrics> cross_validate(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& data,
                                        std::span<const Fold> folds,
                                        const std::optional<smote::SmoteConfig>& per_fold_smote = std::nullopt);

}  // namespace hitpred::evaluation
