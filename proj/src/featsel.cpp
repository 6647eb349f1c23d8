#include "hitpred/featsel.hpp"

#include "hitpred/error.hpp"
#include "hitpred/log.hpp"
#include "hitpred/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hitpred::featsel {

bool is_novel_feature(std::string_view name) {
    return name == featureng::kPopularityContinuity || name == featureng::kGenreClass ||
           name == featureng::kTitleTopic;
}

double cv_score(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& train,
                std::span<const std::string> columns, std::span<const evaluation::Fold> folds,
                const SelectionOptions& options) {
    const auto subset = featureng::select_columns(train, columns);
    const auto metrics = evaluation::cross_validate(spec, subset, folds, options.per_fold_smote);
    return options.objective == Objective::accuracy ? evaluation::mean_accuracy(metrics)
                                                    : evaluation::mean_auc(metrics);
}

double baseline_score(const featureng::FeatureMatrix& train, std::span<const evaluation::Fold> folds,
                      Objective objective) {
    if (objective == Objective::auc) return 0.5;
    double total = 0;
    for (const auto& f : folds) {
        std::size_t pos = 0;
        for (auto i : f.train) pos += static_cast<std::size_t>(train.labels[i]);
        const int majority = 2 * pos >= f.train.size() ? 1 : 0;
        std::size_t correct = 0;
        for (auto i : f.validate) correct += train.labels[i] == majority ? 1 : 0;
        total += static_cast<double>(correct) / static_cast<double>(f.validate.size());
    }
    return total / static_cast<double>(folds.size());
}

SelectionTrace forward_select(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& train,
                              std::span<const std::string> candidates, const SelectionOptions& options) {
    if (candidates.empty()) throw ParameterError("forward selection needs at least one candidate feature");
    std::vector<std::pair<std::size_t, std::string>> remaining;
    for (const auto& c : candidates) {
        auto idx = train.column_index(c);
        if (!idx) throw ParameterError("candidate feature '" + c + "' is not a column of the training matrix");
        if (std::any_of(remaining.begin(), remaining.end(), [&](const auto& r) { return r.second == c; })) {
            throw ParameterError("candidate feature '" + c + "' listed twice");
        }
        remaining.emplace_back(*idx, c);
    }
    std::sort(remaining.begin(), remaining.end());

    const auto folds = evaluation::kfold(train.labels, options.folds, options.stratified, options.fold_seed);

    SelectionTrace trace;
    trace.model = spec.kind;
    trace.model_seed = spec.seed;
    trace.fold_seed = options.fold_seed;
    trace.baseline = baseline_score(train, folds, options.objective);
    double incumbent = trace.baseline;

    while (!remaining.empty()) {
        std::vector<double> scores(remaining.size(), std::numeric_limits<double>::quiet_NaN());
        parallel_for(remaining.size(), options.workers, [&](std::size_t i) {
            auto cols = trace.selected;
            cols.push_back(remaining[i].second);
            try {
                scores[i] = cv_score(spec, train, cols, folds, options);
            } catch (const std::exception& e) {
                log::warn("forward selection: skipping '" + remaining[i].second + "' for " +
                          std::string(classifiers::to_string(spec.kind)) + ": " + e.what());
            }
        });

        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            if (std::isnan(scores[i])) continue;
            if (!best || scores[i] > scores[*best]) best = i;
        }
        if (!best || !(scores[*best] > incumbent + options.epsilon)) break;

        incumbent = scores[*best];
        trace.selected.push_back(remaining[*best].second);
        trace.steps.push_back({remaining[*best].second, incumbent});
        log::info("forward selection (" + std::string(classifiers::to_string(spec.kind)) + "): + " +
                  remaining[*best].second + " -> " + std::to_string(incumbent));
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(*best));
    }
    return trace;
}

nlohmann::json to_json(const SelectionTrace& t) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : t.steps) steps.push_back({{"feature", s.feature}, {"score", s.score}});
    return {{"model", classifiers::to_string(t.model)},
            {"baseline", t.baseline},
            {"steps", steps},
            {"selected", t.selected},
            {"model_seed", t.model_seed},
            {"fold_seed", t.fold_seed}};
}

std::string selection_markdown(std::span<const SelectionTrace> traces) {
    std::ostringstream out;
    out << "| Classifier | Accepted Feature Combination | Features | CV score |\n";
    out << "|---|---|---|---|\n";
    for (const auto& t : traces) {
        out << "| " << classifiers::to_string(t.model) << " | ";
        for (std::size_t i = 0; i < t.selected.size(); ++i) {
            if (i) out << ", ";
            const auto& f = t.selected[i];
            if (is_novel_feature(f)) {
                out << '*' << f << '*';
            } else if (f == featureng::kLyricsTopic) {
                out << "**" << f << "**";
            } else {
                out << f;
            }
        }
        out << " | " << t.selected.size() << " | ";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", t.steps.empty() ? t.baseline : t.steps.back().score);
        out << buf << " |\n";
    }
    out << "\nNovel features are in italics; the lyrics feature is in bold.\n";
    return out.str();
}

}  // namespace hitpred::featsel
