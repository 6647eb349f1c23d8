#include "hitpred/ingest.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/error.hpp"
#include "hitpred/log.hpp"

#include <algorithm>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace hitpred::ingest {
namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_missing_token(std::string_view cell) {
    std::string v = lower(csv::trim(cell));
    return v.empty() || v == "na" || v == "n/a" || v == "nan" || v == "null" || v == "none";
}

std::optional<double> parse_audio_cell(std::string_view cell) {
    if (is_missing_token(cell)) return std::nullopt;
    return csv::parse_double(cell);
}

std::size_t require_column(const std::vector<std::string>& header, const std::string& name,
                           std::string_view field) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (csv::trim(header[i]) == name) return i;
    }
    throw SchemaError("required column '" + name + "' (for field " + std::string(field) +
                      ") not found in header");
}

constexpr double kAudioConflictTolerance = 1e-6;

}  // namespace

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> parse_date(std::string_view text) {
    text = csv::trim(text);
    if (text.size() > 10 && (text[10] == 'T' || text[10] == ' ')) text = text.substr(0, 10);
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    auto y = csv::parse_integer(text.substr(0, 4));
    auto m = csv::parse_integer(text.substr(5, 2));
    auto d = csv::parse_integer(text.substr(8, 2));
    if (!y || !m || !d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year(static_cast<int>(*y)),
                                          std::chrono::month(static_cast<unsigned>(*m)),
                                          std::chrono::day(static_cast<unsigned>(*d))};
    if (*m < 1 || *m > 12 || *d < 1 || *d > 31 || !ymd.ok()) return std::nullopt;
    return Date{static_cast<int>(*y), static_cast<int>(*m), static_cast<int>(*d)};
}

bool SongRecord::audio_complete() const {
    return std::all_of(audio.begin(), audio.end(), [](const auto& v) { return v.has_value(); });
}

std::array<double, kAudioFeatureCount> SongRecord::audio_values() const {
    std::array<double, kAudioFeatureCount> out{};
    for (std::size_t i = 0; i < kAudioFeatureCount; ++i) {
        if (!audio[i]) throw DataError("song '" + title + "' is missing audio field " +
                                       std::string(kAudioFeatureNames[i]));
        out[i] = *audio[i];
    }
    return out;
}

std::vector<RawRow> parse_dataset(std::istream& in, const ColumnMapping& mapping) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw SchemaError("input is empty: no header row");

    const std::size_t c_title = require_column(*header, mapping.title, "title");
    const std::size_t c_artist = require_column(*header, mapping.artist, "artist");
    const std::size_t c_date = require_column(*header, mapping.week_date, "week_date");
    const std::size_t c_rank = require_column(*header, mapping.rank, "rank");
    const std::size_t c_genre = require_column(*header, mapping.broad_genre, "broad_genre");
    const std::size_t c_lyrics = require_column(*header, mapping.lyrics, "lyrics");
    std::array<std::size_t, kAudioFeatureCount> c_audio{};
    for (std::size_t i = 0; i < kAudioFeatureCount; ++i) {
        c_audio[i] = require_column(*header, mapping.audio[i], kAudioFeatureNames[i]);
    }

    std::vector<RawRow> rows;
    while (auto rec = reader.next()) {
        RawRow row;
        row.line = reader.record_line();
        auto cell = [&](std::size_t c) -> std::string_view {
            return c < rec->size() ? std::string_view((*rec)[c]) : std::string_view{};
        };
        auto flag = [&](std::string reason) {
            if (!row.malformed) {
                row.malformed = true;
                row.malformed_reason = std::move(reason);
            }
        };

        if (rec->size() != header->size()) {
            flag("expected " + std::to_string(header->size()) + " fields, found " +
                 std::to_string(rec->size()));
        }
        row.title = std::string(csv::trim(cell(c_title)));
        row.artist = std::string(csv::trim(cell(c_artist)));
        row.broad_genre = std::string(csv::trim(cell(c_genre)));
        row.lyrics = std::string(cell(c_lyrics));
        row.week_date = parse_date(cell(c_date));
        if (auto r = csv::parse_integer(cell(c_rank)); r && *r >= 1 && *r <= 100) {
            row.rank = static_cast<int>(*r);
        }
        for (std::size_t i = 0; i < kAudioFeatureCount; ++i) {
            row.audio[i] = parse_audio_cell(cell(c_audio[i]));
        }

        if (row.title.empty()) flag("empty title");
        if (!row.rank) flag("unparseable or out-of-range rank '" + std::string(cell(c_rank)) + "'");
        if (!row.week_date) flag("unparseable date '" + std::string(cell(c_date)) + "'");
        if (row.malformed) {
            log::debug("line " + std::to_string(row.line) + ": " + row.malformed_reason);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string song_key(std::string_view title, std::string_view artist) {
    auto norm = [](std::string_view s) {
        std::string out;
        bool pending_space = false;
        for (char c : s) {
            if (std::isspace(static_cast<unsigned char>(c))) {
                pending_space = !out.empty();
                continue;
            }
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        return out;
    };
    return norm(title) + '\x1f' + norm(artist);
}

std::vector<SongRecord> aggregate_songs(std::span<const RawRow> rows) {
    std::unordered_map<std::string, std::size_t> group_of;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].malformed) continue;
        auto key = song_key(rows[i].title, rows[i].artist);
        auto [it, inserted] = group_of.try_emplace(std::move(key), groups.size());
        if (inserted) groups.emplace_back();
        groups[it->second].push_back(i);
    }

    std::vector<SongRecord> songs;
    songs.reserve(groups.size());
    for (const auto& members : groups) {
        // Earliest week wins; stable on file order.
        std::size_t first = members.front();
        for (std::size_t i : members) {
            if (*rows[i].week_date < *rows[first].week_date) first = i;
        }
        const RawRow& head = rows[first];
        SongRecord song;
        song.title = head.title;
        song.artist = head.artist;
        song.broad_genre = head.broad_genre;
        song.audio = head.audio;
        song.lyrics = head.lyrics;
        song.weeks_on_chart = static_cast<int>(members.size());
        song.peak_rank = *head.rank;
        bool conflict = false;
        for (std::size_t i : members) {
            song.peak_rank = std::min(song.peak_rank, *rows[i].rank);
            for (std::size_t f = 0; f < kAudioFeatureCount; ++f) {
                const auto& a = rows[i].audio[f];
                const auto& b = head.audio[f];
                if (a && b && std::fabs(*a - *b) > kAudioConflictTolerance) conflict = true;
            }
        }
        if (conflict) {
            log::warn("conflicting audio values for '" + song.title + "' by '" + song.artist +
                      "'; keeping earliest week's values");
        }
        songs.push_back(std::move(song));
    }
    return songs;
}

std::optional<std::string> canonical_genre(std::string_view text) {
    std::string g = lower(csv::trim(text));
    for (auto name : kGenreNames) {
        if (g == name) return g;
    }
    return std::nullopt;
}

CleanResult clean(std::vector<SongRecord> records) {
    CleanResult out;
    out.stats.input = records.size();
    for (auto& r : records) {
        if (!r.audio_complete()) {
            ++out.stats.missing_audio;
        } else if (csv::trim(r.lyrics).empty()) {
            ++out.stats.empty_lyrics;
        } else if (!canonical_genre(r.broad_genre)) {
            ++out.stats.unknown_genre;
        } else {
            out.records.push_back(std::move(r));
        }
    }
    out.stats.retained = out.records.size();
    log::info("clean: " + std::to_string(out.stats.input) + " songs in, " +
              std::to_string(out.stats.retained) + " retained; removed " +
              std::to_string(out.stats.missing_audio) + " missing audio, " +
              std::to_string(out.stats.empty_lyrics) + " empty lyrics, " +
              std::to_string(out.stats.unknown_genre) + " unknown genre");
    return out;
}

int label_for_peak(int peak_rank) { return peak_rank <= 10 ? 1 : 0; }

void assign_labels(std::vector<SongRecord>& records) {
    for (auto& r : records) r.label = label(r);
}

DateRange observed_date_range(std::span<const RawRow> rows) {
    DateRange range;
    for (const auto& r : rows) {
        if (r.malformed || !r.week_date) continue;
        if (!range.first || *r.week_date < *range.first) range.first = r.week_date;
        if (!range.last || *range.last < *r.week_date) range.last = r.week_date;
    }
    return range;
}

std::vector<std::string> cleaned_header() {
    std::vector<std::string> h = {"title", "artist", "weeks_on_chart", "peak_rank", "broad_genre"};
    for (auto n : kAudioFeatureNames) h.emplace_back(n);
    h.emplace_back("lyrics");
    h.emplace_back("label");
    return h;
}

void write_cleaned_csv(std::ostream& out, std::span<const SongRecord> records) {
    csv::write_record(out, cleaned_header());
    for (const auto& r : records) {
        std::vector<std::string> f = {r.title, r.artist, std::to_string(r.weeks_on_chart),
                                      std::to_string(r.peak_rank), r.broad_genre};
        for (const auto& a : r.audio) f.push_back(a ? csv::format_double(*a) : std::string{});
        f.push_back(r.lyrics);
        f.push_back(std::to_string(r.label.value_or(label(r))));
        csv::write_record(out, f);
    }
}

std::vector<SongRecord> read_cleaned_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    const auto expected = cleaned_header();
    if (!header || *header != expected) {
        throw SchemaError("cleaned dataset header does not match the canonical column order");
    }
    std::vector<SongRecord> out;
    while (auto rec = reader.next()) {
        if (rec->size() != expected.size()) {
            throw DataError("cleaned dataset line " + std::to_string(reader.record_line()) +
                            ": wrong field count");
        }
        const auto& f = *rec;
        SongRecord r;
        r.title = f[0];
        r.artist = f[1];
        auto weeks = csv::parse_integer(f[2]);
        auto peak = csv::parse_integer(f[3]);
        auto lab = csv::parse_integer(f[5 + kAudioFeatureCount + 1]);
        if (!weeks || !peak || !lab) {
            throw DataError("cleaned dataset line " + std::to_string(reader.record_line()) +
                            ": bad integer field");
        }
        r.weeks_on_chart = static_cast<int>(*weeks);
        r.peak_rank = static_cast<int>(*peak);
        r.broad_genre = f[4];
        for (std::size_t i = 0; i < kAudioFeatureCount; ++i) r.audio[i] = csv::parse_double(f[5 + i]);
        r.lyrics = f[5 + kAudioFeatureCount];
        r.label = static_cast<int>(*lab);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace hitpred::ingest
