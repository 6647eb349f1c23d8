#pragma once

#include "hitpred/classifiers.hpp"
#include "hitpred/matrix.hpp"
#include "hitpred/rng.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace hitpred::classifiers {

// 1 - sum p_c^2 over the two classes; 0 for an empty node.
double gini_impurity(std::size_t negatives, std::size_t positives);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0;  // x[feature] <= threshold goes left
    int left = -1;
    int right = -1;
    int vote = 0;  // leaf class: 1 when positives >= negatives
};

struct TreeGrowth {
    int m_try = 1;
    int min_samples_split = 2;
};

class DecisionTree {
public:
    // Grows a CART tree on X rows listed in `sample` (duplicates allowed).
    // Each node tries m_try features drawn without replacement, scanned in
    // ascending index order; the split maximising the Gini decrease wins,
    // with the earlier feature and lower threshold winning ties. Growth stops
    // on pure nodes, nodes below min_samples_split, or when no split has
    // positive gain.
    static DecisionTree grow(const Matrix& X, std::span<const int> y, std::span<const std::size_t> sample,
                             const TreeGrowth& growth, Rng& rng);

    int predict(std::span<const double> x) const;
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    nlohmann::json to_json() const;
    static DecisionTree from_json(const nlohmann::json& j);

private:
    std::vector<TreeNode> nodes_;
};

// Score = fraction of trees voting hit.
class RandomForestClassifier final : public Classifier {
public:
    RandomForestClassifier(const featureng::FeatureMatrix& train, const RfParams& params, std::uint64_t seed);
    RandomForestClassifier(std::vector<std::string> columns, const nlohmann::json& state);

    ModelKind kind() const override { return ModelKind::rf; }
    const std::vector<DecisionTree>& trees() const { return trees_; }

protected:
    double score_row(std::span<const double> x) const override;
    nlohmann::json state_json() const override;

private:
    std::vector<DecisionTree> trees_;
};

}  // namespace hitpred::classifiers
