#include "hitpred/naive_bayes.hpp"

#include "hitpred/error.hpp"

#include <cmath>
#include <numbers>

namespace hitpred::classifiers {

NaiveBayesClassifier::NaiveBayesClassifier(const featureng::FeatureMatrix& train, const NbParams& params)
    : Classifier(train.column_names), default_probability_(params.default_probability) {
    if (!(params.default_probability > 0)) throw ParameterError("NB default probability must be positive");
    const std::size_t d = train.cols();
    std::array<std::size_t, 2> counts{0, 0};
    for (int l : train.labels) ++counts[l];
    if (counts[0] == 0 || counts[1] == 0) {
        throw DataError("naive Bayes needs both classes in the training data");
    }
    for (int c = 0; c < 2; ++c) {
        auto& s = classes_[c];
        s.prior = static_cast<double>(counts[c]) / static_cast<double>(train.rows());
        s.mean.assign(d, 0.0);
        s.variance.assign(d, 0.0);
    }
    for (std::size_t r = 0; r < train.rows(); ++r) {
        auto& s = classes_[train.labels[r]];
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += train.values(r, j);
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& m : classes_[c].mean) m /= static_cast<double>(counts[c]);
    }
    for (std::size_t r = 0; r < train.rows(); ++r) {
        auto& s = classes_[train.labels[r]];
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = train.values(r, j) - s.mean[j];
            s.variance[j] += diff * diff;
        }
    }
    for (int c = 0; c < 2; ++c) {
        for (auto& v : classes_[c].variance) {
            v = std::max(v / static_cast<double>(counts[c]), params.variance_floor);
        }
    }
}

NaiveBayesClassifier::NaiveBayesClassifier(std::vector<std::string> columns, const nlohmann::json& state)
    : Classifier(std::move(columns)) {
    default_probability_ = state.at("default_probability").get<double>();
    const auto& cls = state.at("classes");
    for (int c = 0; c < 2; ++c) {
        classes_[c].prior = cls.at(c).at("prior").get<double>();
        classes_[c].mean = cls.at(c).at("mean").get<std::vector<double>>();
        classes_[c].variance = cls.at(c).at("variance").get<std::vector<double>>();
    }
}

double NaiveBayesClassifier::density(int label, std::size_t j, double x) const {
    const auto& s = classes_[label];
    const double diff = x - s.mean[j];
    const double g = std::exp(-diff * diff / (2 * s.variance[j])) / std::sqrt(2 * std::numbers::pi * s.variance[j]);
    return std::max(g, default_probability_);
}

double NaiveBayesClassifier::score_row(std::span<const double> x) const {
    std::array<double, 2> log_post{};
    for (int c = 0; c < 2; ++c) {
        double lp = std::log(classes_[c].prior);
        for (std::size_t j = 0; j < x.size(); ++j) lp += std::log(density(c, j, x[j]));
        log_post[c] = lp;
    }
    // P(hit | x) = 1 / (1 + exp(lp0 - lp1)).
    return 1.0 / (1.0 + std::exp(log_post[0] - log_post[1]));
}

nlohmann::json NaiveBayesClassifier::state_json() const {
    nlohmann::json cls = nlohmann::json::array();
    for (const auto& s : classes_) {
        cls.push_back({{"prior", s.prior}, {"mean", s.mean}, {"variance", s.variance}});
    }
    return {{"default_probability", default_probability_}, {"classes", cls}};
}

}  // namespace hitpred::classifiers
