#include "hitpred/featureng.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/error.hpp"

#include <algorithm>
#include <cmath>

namespace hitpred::featureng {

const std::vector<std::string>& full_feature_columns() {
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c;
        for (auto n : ingest::kAudioFeatureNames) c.emplace_back(n);
        c.emplace_back(kPopularityContinuity);
        c.emplace_back(kGenreClass);
        c.emplace_back(kTitleTopic);
        c.emplace_back(kLyricsTopic);
        return c;
    }();
    return cols;
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < column_names.size(); ++i) {
        if (column_names[i] == name) return i;
    }
    return std::nullopt;
}

void FeatureMatrix::validate() const {
    if (values.rows() != labels.size() || values.rows() != ids.size()) {
        throw ConsistencyError("feature matrix rows, labels and ids are not aligned");
    }
    if (values.rows() > 0 && values.cols() != column_names.size()) {
        throw ConsistencyError("feature matrix width does not match its column names");
    }
    for (double v : values.data()) {
        if (!std::isfinite(v)) throw ConsistencyError("feature matrix contains a non-finite cell");
    }
    for (int l : labels) {
        if (l != 0 && l != 1) throw ConsistencyError("labels must be 0 or 1");
    }
}

int popularity_continuity(int weeks) {
    if (weeks < 0) throw ParameterError("weeks on chart cannot be negative");
    if (weeks > 50) return 3;
    if (weeks >= 20) return 2;
    if (weeks >= 10) return 1;
    return 0;
}

int genre_class(std::string_view broad_genre) {
    auto g = ingest::canonical_genre(broad_genre);
    if (g) {
        for (std::size_t i = 0; i < ingest::kGenreNames.size(); ++i) {
            if (*g == ingest::kGenreNames[i]) return static_cast<int>(i) + 1;
        }
    }
    throw DataError("unknown genre '" + std::string(broad_genre) + "'");
}

FeatureMatrix assemble(std::span<const ingest::SongRecord> records, std::span<const int> title_topics,
                       std::span<const int> lyrics_topics) {
    if (title_topics.size() != records.size() || lyrics_topics.size() != records.size()) {
        throw ConsistencyError("topic assignments cover " + std::to_string(title_topics.size()) + "/" +
                               std::to_string(lyrics_topics.size()) + " songs, expected " +
                               std::to_string(records.size()));
    }
    FeatureMatrix m;
    m.column_names = full_feature_columns();
    m.values = Matrix(records.size(), m.column_names.size());
    m.labels.reserve(records.size());
    m.ids.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        auto audio = r.audio_values();
        auto row = m.values.row(i);
        std::copy(audio.begin(), audio.end(), row.begin());
        row[12] = popularity_continuity(r.weeks_on_chart);
        row[13] = genre_class(r.broad_genre);
        row[14] = title_topics[i];
        row[15] = lyrics_topics[i];
        m.labels.push_back(r.label.value_or(ingest::label(r)));
        m.ids.push_back(r.title + " - " + r.artist);
    }
    return m;
}

FeatureMatrix select_columns(const FeatureMatrix& m, std::span<const std::string> names) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
        auto i = m.column_index(n);
        if (!i) throw ConsistencyError("feature matrix has no column '" + n + "'");
        idx.push_back(*i);
    }
    FeatureMatrix out;
    out.column_names.assign(names.begin(), names.end());
    out.values = Matrix(m.rows(), idx.size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < idx.size(); ++c) out.values(r, c) = m.values(r, idx[c]);
    }
    out.labels = m.labels;
    out.ids = m.ids;
    return out;
}

FeatureMatrix select_rows(const FeatureMatrix& m, std::span<const std::size_t> rows) {
    FeatureMatrix out;
    out.column_names = m.column_names;
    out.values = Matrix(rows.size(), m.cols());
    out.labels.reserve(rows.size());
    out.ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = m.values.row(rows[i]);
        std::copy(src.begin(), src.end(), out.values.row(i).begin());
        out.labels.push_back(m.labels[rows[i]]);
        out.ids.push_back(m.ids[rows[i]]);
    }
    return out;
}

FeatureMatrix append_column(FeatureMatrix m, std::string name, std::span<const double> values) {
    if (values.size() != m.rows()) throw ConsistencyError("appended column has the wrong length");
    Matrix grown(m.rows(), m.cols() + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto src = m.values.row(r);
        std::copy(src.begin(), src.end(), grown.row(r).begin());
        grown(r, m.cols()) = values[r];
    }
    m.values = std::move(grown);
    m.column_names.push_back(std::move(name));
    return m;
}

MinMaxParams fit_minmax(const FeatureMatrix& train) {
    if (train.rows() == 0) throw DataError("cannot fit min-max normalization on an empty matrix");
    MinMaxParams p;
    p.column_names = train.column_names;
    p.min.assign(train.cols(), 0.0);
    p.max.assign(train.cols(), 0.0);
    for (std::size_t c = 0; c < train.cols(); ++c) {
        double lo = train.values(0, c), hi = lo;
        for (std::size_t r = 1; r < train.rows(); ++r) {
            lo = std::min(lo, train.values(r, c));
            hi = std::max(hi, train.values(r, c));
        }
        p.min[c] = lo;
        p.max[c] = hi;
    }
    return p;
}

FeatureMatrix apply_minmax(const MinMaxParams& p, const FeatureMatrix& m) {
    if (p.column_names != m.column_names) {
        throw ConsistencyError("min-max parameters were fit on different columns");
    }
    FeatureMatrix out = m;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double range = p.max[c] - p.min[c];
            double v = range > 0 ? (m.values(r, c) - p.min[c]) / range : 0.0;
            out.values(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

nlohmann::json to_json(const MinMaxParams& p) {
    return {{"columns", p.column_names}, {"min", p.min}, {"max", p.max}};
}

MinMaxParams minmax_from_json(const nlohmann::json& j) {
    MinMaxParams p;
    p.column_names = j.at("columns").get<std::vector<std::string>>();
    p.min = j.at("min").get<std::vector<double>>();
    p.max = j.at("max").get<std::vector<double>>();
    if (p.min.size() != p.column_names.size() || p.max.size() != p.column_names.size()) {
        throw DataError("min-max parameter arrays have inconsistent lengths");
    }
    return p;
}

void write_feature_csv(std::ostream& out, const FeatureMatrix& m) {
    auto header = m.column_names;
    header.emplace_back("label");
    csv::write_record(out, header);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<std::string> f;
        for (double v : m.values.row(r)) f.push_back(csv::format_double(v));
        f.push_back(std::to_string(m.labels[r]));
        csv::write_record(out, f);
    }
}

}  // namespace hitpred::featureng
