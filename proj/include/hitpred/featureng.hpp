#pragma once

// Feature matrix assembly: the 12 audio descriptors plus the engineered
// popularity continuity, genre class, title topic and lyrics topic columns.

#include "hitpred/ingest.hpp"
#include "hitpred/matrix.hpp"

#include <json.hpp>

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hitpred::featureng {

inline constexpr std::string_view kPopularityContinuity = "popularity_continuity";
inline constexpr std::string_view kGenreClass = "genre_class";
inline constexpr std::string_view kTitleTopic = "title_topic";
inline constexpr std::string_view kLyricsTopic = "lyrics_topic";
inline constexpr std::string_view kWeeksOnChart = "weeks_on_chart";

// 12 audio columns in canonical order, then the four engineered columns.
const std::vector<std::string>& full_feature_columns();

struct FeatureMatrix {
    std::vector<std::string> column_names;
    Matrix values;
    std::vector<int> labels;
    std::vector<std::string> ids;

    std::size_t rows() const { return values.rows(); }
    std::size_t cols() const { return column_names.size(); }
    std::optional<std::size_t> column_index(std::string_view name) const;
    // Throws ConsistencyError when the invariants (aligned rows, no
    // non-finite cells, binary labels) do not hold.
    void validate() const;
};

// weeks > 50 -> 3; 20..50 -> 2; 10..19 -> 1; below 10 -> 0.
// Throws ParameterError for negative weeks.
int popularity_continuity(int weeks_on_chart);

// country 1, edm 2, pop 3, r&b 4, rock 5, rap 6 (case-insensitive).
// Throws DataError for anything else.
int genre_class(std::string_view broad_genre);

// One row per record, full_feature_columns() order. Throws ConsistencyError
// when the topic vectors do not cover every record.
FeatureMatrix assemble(std::span<const ingest::SongRecord> records, std::span<const int> title_topics,
                       std::span<const int> lyrics_topics);

FeatureMatrix select_columns(const FeatureMatrix& m, std::span<const std::string> names);
FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> rows);
FeatureMatrix append_column(FeatureMatrix m, std::string name, std::span<const double> values);

struct MinMaxParams {
    std::vector<std::string> column_names;
    std::vector<double> min;
    std::vector<double> max;
};

MinMaxParams fit_minmax(const FeatureMatrix& train);
// (x - min) / (max - min), clipped to [0, 1]; constant columns map to 0.
FeatureMatrix apply_minmax(const MinMaxParams& params, const FeatureMatrix& m);

nlohmann::json to_json(const MinMaxParams& p);
MinMaxParams minmax_from_json(const nlohmann::json& j);

// Header = column names + "label"; the id column is not written.
void write_feature_csv(std::ostream& out, const FeatureMatrix& m);

}  // namespace hitpred::featureng
