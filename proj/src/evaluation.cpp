#include "hitpred/evaluation.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/error.hpp"
#include "hitpred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hitpred::evaluation {
namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ConsistencyError(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                               std::to_string(b) + ")");
    }
}

}  // namespace

SplitPlan split(std::span<const int> labels, double ratio, bool stratified, std::uint64_t seed) {
    if (!(ratio > 0 && ratio < 1)) throw ParameterError("split ratio must be in (0, 1)");
    std::vector<std::size_t> groups[2];
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i] == 1 ? 1 : 0].push_back(i);
    for (const auto& g : groups) {
        if (g.size() < 2) throw DataError("split needs at least 2 rows of each class");
    }

    SplitPlan plan;
    plan.ratio = ratio;
    plan.stratified = stratified;
    plan.seed = seed;
    Rng rng(seed);
    auto take = [&](std::vector<std::size_t> idx) {
        rng.shuffle(std::span<std::size_t>(idx));
        auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        plan.train.insert(plan.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        plan.test.insert(plan.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    };
    if (stratified) {
        take(groups[0]);
        take(groups[1]);
    } else {
        std::vector<std::size_t> all(labels.size());
        std::iota(all.begin(), all.end(), 0);
        take(std::move(all));
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    return plan;
}

std::vector<Fold> kfold(std::span<const int> labels, int k, bool stratified, std::uint64_t seed) {
    if (k < 2) throw ParameterError("k-fold needs k >= 2");
    const std::size_t n = labels.size();
    const auto folds_n = static_cast<std::size_t>(k);
    if (n < folds_n) {
        throw DataError("k-fold with k=" + std::to_string(k) + " needs at least k rows, found " + std::to_string(n));
    }
    std::vector<std::size_t> fold_of(n);
    Rng rng(seed);
    std::size_t next = 0;
    auto deal = [&](std::vector<std::size_t> idx) {
        rng.shuffle(std::span<std::size_t>(idx));
        for (std::size_t i : idx) fold_of[i] = next++ % folds_n;
    };
    if (stratified) {
        std::vector<std::size_t> groups[2];
        for (std::size_t i = 0; i < n; ++i) groups[labels[i] == 1 ? 1 : 0].push_back(i);
        deal(std::move(groups[0]));
        deal(std::move(groups[1]));
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        deal(std::move(all));
    }
    std::vector<Fold> folds(folds_n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < folds_n; ++f) (f == fold_of[i] ? folds[f].validate : folds[f].train).push_back(i);
    }
    return folds;
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
    require_same_length(predictions.size(), labels.size(), "accuracy");
    if (labels.empty()) throw DataError("accuracy of an empty prediction set is undefined");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) hits += predictions[i] == labels[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    require_same_length(scores.size(), labels.size(), "auc");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of mid-ranks (1-based) of the positives.
    double rank_sum = 0;
    std::size_t positives = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (labels[order[t]] == 1) {
                rank_sum += mid_rank;
                ++positives;
            }
        }
        i = j;
    }
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) throw DataError("AUC is undefined unless both classes are present");
    const double p = static_cast<double>(positives);
    const double u = rank_sum - p * (p + 1) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

Confusion confusion(std::span<const int> predictions, std::span<const int> labels) {
    require_same_length(predictions.size(), labels.size(), "confusion");
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (predictions[i] == 1) {
            (labels[i] == 1 ? c.tp : c.fp) += 1;
        } else {
            (labels[i] == 1 ? c.fn : c.tn) += 1;
        }
    }
    return c;
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
    require_same_length(scores.size(), labels.size(), "roc_curve");
    std::size_t pos = 0;
    for (int l : labels) pos += l == 1 ? 1 : 0;
    const std::size_t neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw DataError("ROC curve needs both classes");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    std::vector<RocPoint> points{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double t = scores[order[i]];
        while (i < order.size() && scores[order[i]] == t) {
            (labels[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        points.push_back({t, static_cast<double>(fp) / static_cast<double>(neg),
                          static_cast<double>(tp) / static_cast<double>(pos)});
    }
    return points;
}

double roc_area(std::span<const RocPoint> points) {
    double area = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
    }
    return area;
}

double mean_accuracy(std::span<const FoldMetrics> folds) {
    if (folds.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0;
    for (const auto& f : folds) s += f.accuracy;
    return s / static_cast<double>(folds.size());
}

double mean_auc(std::span<const FoldMetrics> folds) {
    double s = 0;
    std::size_t n = 0;
    for (const auto& f : folds) {
        if (std::isnan(f.auc)) continue;
        s += f.auc;
        ++n;
    }
    return n ? s / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double EvalReport::cv_accuracy() const { return mean_accuracy(per_fold); }
double EvalReport::cv_auc() const { return mean_auc(per_fold); }

EvalReport evaluate_scores(std::span<const double> scores, std::span<const int> labels) {
    EvalReport r;
    std::vector<int> pred(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = classifiers::threshold_score(scores[i]);
    r.accuracy = accuracy(pred, labels);
    r.confusion = confusion(pred, labels);
    r.auc = auc(scores, labels);
    r.roc_points = roc_curve(scores, labels);
    return r;
}

nlohmann::json to_json(const EvalReport& r) {
    auto num = [](double v) -> nlohmann::json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : r.per_fold) folds.push_back({{"accuracy", num(f.accuracy)}, {"auc", num(f.auc)}});
    nlohmann::json roc = nlohmann::json::array();
    for (const auto& p : r.roc_points) roc.push_back({num(p.threshold), p.fpr, p.tpr});
    return {{"accuracy", num(r.accuracy)},
            {"auc", num(r.auc)},
            {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"tn", r.confusion.tn}, {"fn", r.confusion.fn}}},
            {"cv_accuracy", num(r.cv_accuracy())},
            {"cv_auc", num(r.cv_auc())},
            {"per_fold", folds},
            {"roc_points", roc}};
}

void write_roc_csv(std::ostream& out, std::span<const RocPoint> points) {
    csv::write_record(out, {"threshold", "fpr", "tpr"});
    for (const auto& p : points) {
        csv::write_record(out, {std::isfinite(p.threshold) ? csv::format_double(p.threshold) : "inf",
                                csv::format_double(p.fpr), csv::format_double(p.tpr)});
    }
}

std::vector<FoldMetrics> cross_validate(const classifiers::ModelSpec& spec, const featureng::FeatureMatrix& data,
                                        std::span<const Fold> folds,
                                        const std::optional<smote::SmoteConfig>& per_fold_smote) {
    std::vector<FoldMetrics> out;
    out.reserve(folds.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
        auto train = featureng::select_rows(data, folds[f].train);
        const auto validate = featureng::select_rows(data, folds[f].validate);
        if (per_fold_smote) {
            auto cfg = *per_fold_smote;
            cfg.seed = derive_seed(cfg.seed, "fold:" + std::to_string(f));
            train = smote::smote_oversample(train, cfg).data;
        }
        const auto model = classifiers::fit(spec, train);
        const auto scores = model->score_all(validate);
        std::vector<int> pred(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) pred[i] = classifiers::threshold_score(scores[i]);
        FoldMetrics m;
        m.accuracy = accuracy(pred, validate.labels);
        try {
            m.auc = auc(scores, validate.labels);
        } catch (const DataError&) {
            m.auc = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace hitpred::evaluation
