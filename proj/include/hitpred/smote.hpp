#pragma once

// Synthetic minority oversampling over a normalized training matrix.

#include "hitpred/featureng.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace hitpred::smote {

// Columns holding integer codes; only touched when round_categorical is set.
const std::vector<std::string>& default_categorical_columns();

struct SmoteConfig {
    int k_neighbors = 5;
    // Minority size after oversampling; nullopt means the majority count.
    std::optional<std::size_t> target_count;
    std::uint64_t seed = 0;
    // Snap coded columns of synthetic rows to the nearest value present in
    // the minority rows of that column.
    bool round_categorical = false;
    std::vector<std::string> categorical_columns = default_categorical_columns();
    // Test hook: use this interpolation factor instead of drawing one.
    std::optional<double> fixed_delta;
};

struct Provenance {
    std::size_t base_row = 0;       // row index in the input matrix
    std::size_t neighbour_row = 0;  // row index in the input matrix
    double delta = 0;
};

struct SmoteResult {
    featureng::FeatureMatrix data;   // input rows unchanged, then synthetic rows
    std::vector<Provenance> provenance;  // one per synthetic row, in order
    int minority_label = 1;
    int k_used = 0;
};

// The minority class is the label with fewer rows (ties: label 1). Synthetic
// row s = x + delta * (x_nn - x), base rows x cycled round-robin over the
// minority rows, x_nn drawn uniformly from the k nearest minority rows
// (Euclidean, lower row index breaks distance ties), delta uniform in [0, 1).
// Throws DataError with fewer than 2 minority rows and ParameterError when
// k_neighbors < 1 or target_count is below the current minority count.
// k is reduced to minority - 1 with a warning when it is larger.
SmoteResult smote_oversample(const featureng::FeatureMatrix& train, const SmoteConfig& config);

// CSV of synthetic_row, base_row, neighbour_row, delta.
void write_provenance_csv(std::ostream& out, std::span<const Provenance> provenance);

}  // namespace hitpred::smote
