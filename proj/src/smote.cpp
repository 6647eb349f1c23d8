#include "hitpred/smote.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/error.hpp"
#include "hitpred/log.hpp"
#include "hitpred/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hitpred::smote {

const std::vector<std::string>& default_categorical_columns() {
    static const std::vector<std::string> cols = {
        "key", "mode", "time_signature", std::string(featureng::kPopularityContinuity),
        std::string(featureng::kGenreClass), std::string(featureng::kTitleTopic),
        std::string(featureng::kLyricsTopic)};
    return cols;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

SmoteResult smote_oversample(const featureng::FeatureMatrix& train, const SmoteConfig& config) {
    if (config.k_neighbors < 1) throw ParameterError("SMOTE needs k_neighbors >= 1");

    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < train.rows(); ++i) by_class[train.labels[i] == 1 ? 1 : 0].push_back(i);
    const int minority_label = by_class[1].size() <= by_class[0].size() ? 1 : 0;
    const auto& minority = by_class[minority_label];
    const auto& majority = by_class[1 - minority_label];

    if (minority.size() < 2) {
        throw DataError("SMOTE needs at least 2 minority rows, found " + std::to_string(minority.size()));
    }
    const std::size_t target = config.target_count.value_or(majority.size());
    if (target < minority.size()) {
        throw ParameterError("SMOTE target count " + std::to_string(target) +
                             " is below the current minority count " + std::to_string(minority.size()));
    }

    std::size_t k = static_cast<std::size_t>(config.k_neighbors);
    if (k > minority.size() - 1) {
        k = minority.size() - 1;
        log::warn("SMOTE k reduced to " + std::to_string(k) + " (only " + std::to_string(minority.size()) +
                  " minority rows)");
    }

    SmoteResult result;
    result.minority_label = minority_label;
    result.k_used = static_cast<int>(k);
    result.data = train;

    const std::size_t needed = target - minority.size();
    if (needed == 0) return result;

    // Exact k nearest minority neighbours of each minority row.
    std::vector<std::vector<std::size_t>> neighbours(minority.size());
    {
        std::vector<std::pair<double, std::size_t>> dist;
        for (std::size_t a = 0; a < minority.size(); ++a) {
            dist.clear();
            for (std::size_t b = 0; b < minority.size(); ++b) {
                if (a == b) continue;
                dist.emplace_back(squared_distance(train.values.row(minority[a]), train.values.row(minority[b])),
                                  minority[b]);
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
            for (std::size_t j = 0; j < k; ++j) neighbours[a].push_back(dist[j].second);
        }
    }

    // Snap targets for coded columns.
    std::vector<std::pair<std::size_t, std::vector<double>>> snap;
    if (config.round_categorical) {
        for (const auto& name : config.categorical_columns) {
            auto c = train.column_index(name);
            if (!c) continue;
            std::set<double> codes;
            for (std::size_t r : minority) codes.insert(train.values(r, *c));
            snap.emplace_back(*c, std::vector<double>(codes.begin(), codes.end()));
        }
    }

    Rng rng(config.seed);
    const std::size_t d = train.cols();
    std::vector<double> row(d);
    result.provenance.reserve(needed);
    for (std::size_t s = 0; s < needed; ++s) {
        const std::size_t a = s % minority.size();
        const std::size_t base = minority[a];
        const std::size_t nn = neighbours[a][rng.index(k)];
        const double delta = config.fixed_delta ? *config.fixed_delta : rng.uniform();

        auto x = train.values.row(base);
        auto y = train.values.row(nn);
        for (std::size_t j = 0; j < d; ++j) {
            // Clamp away rounding so the point stays on the segment.
            row[j] = std::clamp(x[j] + delta * (y[j] - x[j]), std::min(x[j], y[j]), std::max(x[j], y[j]));
        }
        for (const auto& [c, codes] : snap) {
            auto it = std::min_element(codes.begin(), codes.end(), [&](double p, double q) {
                return std::fabs(p - row[c]) < std::fabs(q - row[c]);
            });
            row[c] = *it;
        }

        result.data.values.append_row(row);
        result.data.labels.push_back(minority_label);
        result.data.ids.push_back("synthetic:" + std::to_string(s));
        result.provenance.push_back({base, nn, delta});
    }
    return result;
}

void write_provenance_csv(std::ostream& out, std::span<const Provenance> provenance) {
    csv::write_record(out, {"synthetic_row", "base_row", "neighbour_row", "delta"});
    for (std::size_t i = 0; i < provenance.size(); ++i) {
        csv::write_record(out, {std::to_string(i), std::to_string(provenance[i].base_row),
                                std::to_string(provenance[i].neighbour_row),
                                csv::format_double(provenance[i].delta)});
    }
}

}  // namespace hitpred::smote
