#pragma once

// Reference computations written independently of the library code paths.

#include <functional>
#include <span>
#include <vector>

namespace oracle {

// Exhaustive Mann-Whitney count over all (positive, negative) pairs.
double pairwise_auc(std::span<const double> scores, std::span<const int> labels);

// Central finite-difference gradient of f at x.
std::vector<double> finite_difference(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> x, double h);

double max_relative_error(std::span<const double> a, std::span<const double> b, double floor = 1e-8);

// ||a - b|| / max(||a||, ||b||), Euclidean norms.
double relative_error(std::span<const double> a, std::span<const double> b);

// Exhaustive best-split CART tree over every feature and every midpoint,
// grown recursively on a row list. Ties keep the first candidate found in
// (feature, threshold) ascending order unless beaten by more than 1e-12.
class ExhaustiveTree {
public:
    ExhaustiveTree(const std::vector<std::vector<double>>& X, const std::vector<int>& y);
    int predict(std::span<const double> x) const;

private:
    struct Node {
        int feature = -1;
        double threshold = 0;
        int left = -1, right = -1, vote = 0;
    };
    int build(const std::vector<std::vector<double>>& X, const std::vector<int>& y, std::vector<int> rows);
    std::vector<Node> nodes_;
};

}  // namespace oracle
