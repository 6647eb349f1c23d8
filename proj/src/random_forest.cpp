#include "hitpred/random_forest.hpp"

#include "hitpred/error.hpp"
#include "hitpred/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hitpred::classifiers {
namespace {

// Gains closer than this are treated as equal so ties resolve by scan order.
constexpr double kGainEpsilon = 1e-12;

struct Candidate {
    int feature = -1;
    double threshold = 0;
    double gain = 0;
};

double weighted_child_impurity(std::size_t l0, std::size_t l1, std::size_t r0, std::size_t r1) {
    const double nl = static_cast<double>(l0 + l1);
    const double nr = static_cast<double>(r0 + r1);
    return (nl * gini_impurity(l0, l1) + nr * gini_impurity(r0, r1)) / (nl + nr);
}

}  // namespace

double gini_impurity(std::size_t negatives, std::size_t positives) {
    const double n = static_cast<double>(negatives + positives);
    if (n == 0) return 0.0;
    const double p0 = static_cast<double>(negatives) / n;
    const double p1 = static_cast<double>(positives) / n;
    return 1.0 - (p0 * p0 + p1 * p1);
}

DecisionTree DecisionTree::grow(const Matrix& X, std::span<const int> y, std::span<const std::size_t> sample,
                                const TreeGrowth& growth, Rng& rng) {
    DecisionTree tree;
    const std::size_t d = X.cols();
    const std::size_t m_try = std::min<std::size_t>(static_cast<std::size_t>(growth.m_try), d);

    struct Pending {
        int node;
        std::vector<std::size_t> rows;
    };
    std::vector<Pending> stack;
    tree.nodes_.emplace_back();
    stack.push_back({0, std::vector<std::size_t>(sample.begin(), sample.end())});

    std::vector<std::size_t> features(d);
    std::vector<std::pair<double, int>> column;

    while (!stack.empty()) {
        Pending job = std::move(stack.back());
        stack.pop_back();

        std::size_t n1 = 0;
        for (std::size_t r : job.rows) n1 += static_cast<std::size_t>(y[r]);
        const std::size_t n0 = job.rows.size() - n1;
        tree.nodes_[job.node].vote = n1 >= n0 ? 1 : 0;

        if (n0 == 0 || n1 == 0 || job.rows.size() < static_cast<std::size_t>(growth.min_samples_split)) continue;

        std::iota(features.begin(), features.end(), 0);
        for (std::size_t i = 0; i < m_try; ++i) {
            std::swap(features[i], features[i + rng.index(d - i)]);
        }
        std::vector<std::size_t> tried(features.begin(), features.begin() + static_cast<std::ptrdiff_t>(m_try));
        std::sort(tried.begin(), tried.end());

        const double parent = gini_impurity(n0, n1);
        Candidate best;
        for (std::size_t f : tried) {
            column.clear();
            for (std::size_t r : job.rows) column.emplace_back(X(r, f), y[r]);
            std::sort(column.begin(), column.end());
            std::size_t l0 = 0, l1 = 0;
            for (std::size_t i = 0; i + 1 < column.size(); ++i) {
                (column[i].second ? l1 : l0) += 1;
                const double a = column[i].first;
                const double b = column[i + 1].first;
                if (!(a < b)) continue;
                const double gain = parent - weighted_child_impurity(l0, l1, n0 - l0, n1 - l1);
                if (gain > best.gain + kGainEpsilon) {
                    double mid = a + (b - a) / 2;
                    if (!(mid < b)) mid = a;
                    best = {static_cast<int>(f), mid, gain};
                }
            }
        }
        if (best.feature < 0 || best.gain <= kGainEpsilon) continue;

        std::vector<std::size_t> left, right;
        for (std::size_t r : job.rows) {
            (X(r, static_cast<std::size_t>(best.feature)) <= best.threshold ? left : right).push_back(r);
        }
        const int li = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        const int ri = static_cast<int>(tree.nodes_.size());
        tree.nodes_.emplace_back();
        auto& node = tree.nodes_[job.node];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = li;
        node.right = ri;
        // Right pushed first so the left subtree is grown (and draws from
        // the RNG) first.
        stack.push_back({ri, std::move(right)});
        stack.push_back({li, std::move(left)});
    }
    return tree;
}

int DecisionTree::predict(std::span<const double> x) const {
    int i = 0;
    while (nodes_[i].feature >= 0) {
        const auto& n = nodes_[i];
        i = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].vote;
}

nlohmann::json DecisionTree::to_json() const {
    nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                   left = nlohmann::json::array(), right = nlohmann::json::array(),
                   vote = nlohmann::json::array();
    for (const auto& n : nodes_) {
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        vote.push_back(n.vote);
    }
    return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"vote", vote}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
    DecisionTree t;
    const auto feature = j.at("feature").get<std::vector<int>>();
    const auto threshold = j.at("threshold").get<std::vector<double>>();
    const auto left = j.at("left").get<std::vector<int>>();
    const auto right = j.at("right").get<std::vector<int>>();
    const auto vote = j.at("vote").get<std::vector<int>>();
    for (std::size_t i = 0; i < feature.size(); ++i) {
        t.nodes_.push_back({feature.at(i), threshold.at(i), left.at(i), right.at(i), vote.at(i)});
    }
    if (t.nodes_.empty()) throw DataError("decision tree state has no nodes");
    return t;
}

RandomForestClassifier::RandomForestClassifier(const featureng::FeatureMatrix& train, const RfParams& params,
                                               std::uint64_t seed)
    : Classifier(train.column_names) {
    const std::size_t d = train.cols();
    if (params.n_trees < 1) throw ParameterError("random forest needs n_trees >= 1");
    if (train.rows() == 0) throw DataError("random forest needs a non-empty training set");
    const int m_try = params.m_try > 0 ? params.m_try
                                       : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    if (static_cast<std::size_t>(m_try) > d) {
        throw ParameterError("random forest m_try=" + std::to_string(m_try) + " exceeds " + std::to_string(d) +
                             " features");
    }
    const TreeGrowth growth{m_try, params.min_samples_split};
    const std::size_t n = train.rows();

    trees_.resize(static_cast<std::size_t>(params.n_trees));
    parallel_for(trees_.size(), params.threads, [&](std::size_t t) {
        Rng rng(derive_seed(seed, "tree:" + std::to_string(t)));
        std::vector<std::size_t> sample(n);
        if (params.bootstrap) {
            for (auto& s : sample) s = rng.index(n);
        } else {
            std::iota(sample.begin(), sample.end(), 0);
        }
        trees_[t] = DecisionTree::grow(train.values, train.labels, sample, growth, rng);
    });
}

RandomForestClassifier::RandomForestClassifier(std::vector<std::string> columns, const nlohmann::json& state)
    : Classifier(std::move(columns)) {
    for (const auto& t : state.at("trees")) trees_.push_back(DecisionTree::from_json(t));
    if (trees_.empty()) throw DataError("random forest state has no trees");
}

double RandomForestClassifier::score_row(std::span<const double> x) const {
    int votes = 0;
    for (const auto& t : trees_) votes += t.predict(x);
    return static_cast<double>(votes) / static_cast<double>(trees_.size());
}

nlohmann::json RandomForestClassifier::state_json() const {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : trees_) trees.push_back(t.to_json());
    return {{"trees", trees}};
}

}  // namespace hitpred::classifiers
