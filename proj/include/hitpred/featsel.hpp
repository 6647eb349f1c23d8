#pragma once

// Greedy forward feature selection driven by cross-validated accuracy (or AUC).

#include "hitpred/classifiers.hpp"
#include "hitpred/evaluation.hpp"
#include "hitpred/featureng.hpp"
#include "hitpred/smote.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hitpred::featsel {

enum class Objective { accuracy, auc };

struct SelectionOptions {
    int folds = 5;
    bool stratified = true;
    std::uint64_t fold_seed = 0;
    Objective objective = Objective::accuracy;
    // A candidate is accepted only if it beats the incumbent by more than this.
    double epsilon = 0.0;
    // Oversample each fold's training part; leave unset when `train` is
    // already balanced.
    std::optional<smote::SmoteConfig> per_fold_smote;
    // Threads for candidate evaluation within a round.
    int workers = 1;
};

struct SelectionStep {
    std::string feature;
    double score = 0;  // CV objective after adding `feature`
};

struct SelectionTrace {
    classifiers::ModelKind model = classifiers::ModelKind::lr;
    std::vector<SelectionStep> steps;
    std::vector<std::string> selected;  // same order as steps
    double baseline = 0;                // empty-set score
    std::uint64_t model_seed = 0;
    std::uint64_t fold_seed = 0;
};

// Mean CV objective of `spec` restricted to `columns` (in that order).
double cv_score(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& train,
                std::span<const std::string> columns, std::span<const evaluation::Fold> folds,
                const SelectionOptions& options);

// Empty-set score: majority class of each fold's training part scored on its
// validation part (accuracy objective), or 0.5 (AUC objective).
double baseline_score(const featureng::FeatureMatrix& train, std::span<const evaluation::Fold> folds,
                      Objective objective);

// Starts from the empty set; each round adds the candidate with the best CV
// score if it strictly improves on the incumbent (lower column index wins
// ties). Folds are drawn once and reused for every evaluation. A candidate
// whose training fails is skipped with a warning. Throws ParameterError for
// an empty or unknown candidate list.
SelectionTrace forward_select(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& train,
                              std::span<const std::string> candidates, const SelectionOptions& options);

nlohmann::json to_json(const SelectionTrace& trace);

// Markdown table with one row per trace. Novel engineered features are
// italicised and the lyrics topic is bold.
std::string selection_markdown(std::span<const SelectionTrace> traces);

bool is_novel_feature(std::string_view name);

}  // namespace hitpred::featsel
