#pragma once

// Raw Billboard + Spotify chart export -> cleaned, labeled, one-row-per-song
// records.

#include <array>
#include <compare>
#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hitpred::ingest {

inline constexpr std::size_t kAudioFeatureCount = 12;

// Canonical order of the Spotify audio descriptors. Every matrix and file in
// the project uses this order.
inline constexpr std::array<std::string_view, kAudioFeatureCount> kAudioFeatureNames = {
    "energy",       "liveness", "tempo",       "speechiness", "acousticness", "time_signature",
    "key",          "duration_ms", "loudness", "valence",     "mode",         "danceability"};

inline constexpr std::array<std::string_view, 6> kGenreNames = {"country", "edm", "pop",
                                                                 "r&b",     "rock", "rap"};

// A value of nullopt means the cell was empty or not a finite number.
using AudioValues = std::array<std::optional<double>, kAudioFeatureCount>;

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;
    auto operator<=>(const Date&) const = default;
    std::string to_string() const;
};

// Accepts YYYY-MM-DD, optionally followed by a 'T' or ' ' time part.
std::optional<Date> parse_date(std::string_view text);

// Maps canonical fields onto header names in the input file.
struct ColumnMapping {
    std::string title = "title";
    std::string artist = "artist";
    std::string week_date = "date";
    std::string rank = "rank";
    std::string broad_genre = "broad_genre";
    std::string lyrics = "lyrics";
    std::array<std::string, kAudioFeatureCount> audio = {
        "energy",      "liveness", "tempo",    "speechiness", "acousticness", "time_signature",
        "key",         "duration_ms", "loudness", "valence",  "mode",         "danceability"};
};

struct RawRow {
    std::size_t line = 0;  // physical line the record starts on
    std::string title;
    std::string artist;
    std::optional<Date> week_date;
    std::optional<int> rank;
    std::string broad_genre;
    AudioValues audio;
    std::string lyrics;
    bool malformed = false;
    std::string malformed_reason;
};

struct SongRecord {
    std::string title;
    std::string artist;
    int weeks_on_chart = 0;
    int peak_rank = 0;
    std::string broad_genre;
    AudioValues audio;
    std::string lyrics;
    std::optional<int> label;

    bool audio_complete() const;
    // Audio values in canonical order; requires audio_complete().
    std::array<double, kAudioFeatureCount> audio_values() const;
    bool operator==(const SongRecord&) const = default;
};

// Throws SchemaError when a mapped column is absent from the header.
// Rows with an unparseable rank or date (or rank outside 1..100, or an empty
// title) are returned flagged malformed.
std::vector<RawRow> parse_dataset(std::istream& in, const ColumnMapping& mapping = {});

// Case-folded, whitespace-collapsed identity key for a (title, artist) pair.
std::string song_key(std::string_view title, std::string_view artist);

// Groups non-malformed rows by song_key. Output order is the order in which
// each song first appears in `rows`. Per-song fields come from the row with
// the earliest week_date (file order breaks ties).
std::vector<SongRecord> aggregate_songs(std::span<const RawRow> rows);

// Case-folded canonical genre name, or nullopt if not one of kGenreNames.
std::optional<std::string> canonical_genre(std::string_view text);

struct CleanStats {
    std::size_t input = 0;
    std::size_t retained = 0;
    // Each removed record is counted once, under the first failing check in
    // this order.
    std::size_t missing_audio = 0;
    std::size_t empty_lyrics = 0;
    std::size_t unknown_genre = 0;

    std::size_t removed() const { return missing_audio + empty_lyrics + unknown_genre; }
};

struct CleanResult {
    std::vector<SongRecord> records;
    CleanStats stats;
};

// Pure filter: retained records are returned unchanged.
CleanResult clean(std::vector<SongRecord> records);

int label_for_peak(int peak_rank);
inline int label(const SongRecord& r) { return label_for_peak(r.peak_rank); }
void assign_labels(std::vector<SongRecord>& records);

struct DateRange {
    std::optional<Date> first;
    std::optional<Date> last;
};
DateRange observed_date_range(std::span<const RawRow> rows);

// Canonical cleaned layout: title, artist, weeks_on_chart, peak_rank,
// broad_genre, the 12 audio columns, lyrics, label.
std::vector<std::string> cleaned_header();
void write_cleaned_csv(std::ostream& out, std::span<const SongRecord> records);
std::vector<SongRecord> read_cleaned_csv(std::istream& in);

}  // namespace hitpred::ingest
