#include "hitpred/knn.hpp"

#include "hitpred/error.hpp"

#include <algorithm>
#include <utility>

namespace hitpred::classifiers {

KnnClassifier::KnnClassifier(const featureng::FeatureMatrix& train, const KnnParams& params)
    : Classifier(train.column_names), rows_(train.values), labels_(train.labels), k_(params.k) {
    if (k_ < 1) throw ParameterError("kNN needs k >= 1");
    if (train.rows() == 0) throw DataError("kNN needs a non-empty training set");
    if (static_cast<std::size_t>(k_) > train.rows()) {
        throw ParameterError("kNN k=" + std::to_string(k_) + " exceeds the " + std::to_string(train.rows()) +
                             " training rows");
    }
}

KnnClassifier::KnnClassifier(std::vector<std::string> columns, const nlohmann::json& state)
    : Classifier(std::move(columns)) {
    k_ = state.at("k").get<int>();
    labels_ = state.at("labels").get<std::vector<int>>();
    const auto data = state.at("rows").get<std::vector<double>>();
    const std::size_t d = this->columns().size();
    rows_ = Matrix(labels_.size(), d);
    if (data.size() != labels_.size() * d) throw DataError("kNN state has inconsistent row data");
    std::copy(data.begin(), data.end(), rows_.data().begin());
}

double KnnClassifier::score_row(std::span<const double> x) const {
    std::vector<std::pair<double, std::size_t>> dist(rows_.rows());
    for (std::size_t i = 0; i < rows_.rows(); ++i) {
        auto r = rows_.row(i);
        double s = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double diff = x[j] - r[j];
            s += diff * diff;
        }
        dist[i] = {s, i};
    }
    const auto k = static_cast<std::ptrdiff_t>(k_);
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    int hits = 0;
    for (std::ptrdiff_t i = 0; i < k; ++i) hits += labels_[dist[static_cast<std::size_t>(i)].second];
    return static_cast<double>(hits) / static_cast<double>(k_);
}

nlohmann::json KnnClassifier::state_json() const {
    return {{"k", k_}, {"labels", labels_}, {"rows", rows_.data()}};
}

}  // namespace hitpred::classifiers
