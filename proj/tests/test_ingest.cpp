#include "hitpred/error.hpp"
#include "hitpred/ingest.hpp"
#include "hitpred/log.hpp"

#include "fixture.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

using namespace hitpred;
using namespace hitpred::ingest;

namespace {

const char* kHeader =
    "title,artist,date,rank,broad_genre,lyrics,energy,liveness,tempo,speechiness,acousticness,"
    "time_signature,key,duration_ms,loudness,valence,mode,danceability\n";

std::string line(const std::string& title, const std::string& date, const std::string& rank,
                 const std::string& genre = "pop", const std::string& lyrics = "some words here",
                 const std::string& energy = "0.5") {
    return title + ",Band," + date + "," + rank + "," + genre + "," + lyrics + "," + energy +
           ",0.1,120,0.05,0.2,4,5,200000,-5,0.6,1,0.7\n";
}

std::vector<RawRow> parse(const std::string& text) {
    std::istringstream in(text);
    return parse_dataset(in);
}

}  // namespace

TEST_CASE("header plus one valid line gives one row") {
    const auto rows = parse(std::string(kHeader) + line("Song", "2010-01-02", "5"));
    REQUIRE(rows.size() == 1);
    CHECK_FALSE(rows[0].malformed);
    CHECK(rows[0].title == "Song");
    CHECK(*rows[0].rank == 5);
    CHECK(rows[0].week_date->to_string() == "2010-01-02");
    CHECK(*rows[0].audio[0] == 0.5);
    CHECK(rows[0].line == 2);
}

TEST_CASE("unparseable rank flags the row malformed and it is excluded downstream") {
    const auto rows = parse(std::string(kHeader) + line("A", "2010-01-02", "abc") + line("B", "2010-01-02", "7"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].malformed);
    CHECK_FALSE(rows[0].malformed_reason.empty());
    const auto songs = aggregate_songs(rows);
    REQUIRE(songs.size() == 1);
    CHECK(songs[0].title == "B");
}

TEST_CASE("other malformed cases") {
    const auto rows = parse(std::string(kHeader) + line("A", "2010-01-02", "0") + line("B", "2010-01-02", "101") +
                            line("", "2010-01-02", "3") + line("C", "Jan 2", "3") + "D,too,few\n");
    REQUIRE(rows.size() == 5);
    for (const auto& r : rows) CHECK(r.malformed);
}

TEST_CASE("row count equals line count minus header") {
    fixture::ChartOptions o;
    o.rows = 300;
    const auto text = fixture::chart_csv(o);
    const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    CHECK(parse(text).size() == lines - 1);
}

TEST_CASE("missing column raises a schema error naming it") {
    std::istringstream in("title,artist,date\nA,B,2010-01-01\n");
    try {
        parse_dataset(in);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("rank") != std::string::npos);
    }
}

TEST_CASE("column mapping renames inputs") {
    ColumnMapping m;
    m.title = "song";
    m.week_date = "week";
    std::string text = kHeader;
    text.replace(text.find("title"), 5, "song");
    text.replace(text.find("date"), 4, "week");
    std::istringstream in(text + line("A", "2010-01-02", "3"));
    const auto rows = parse_dataset(in, m);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].title == "A");
}

TEST_CASE("missing-value tokens become empty audio cells") {
    const auto rows = parse(std::string(kHeader) + line("A", "2010-01-02", "3", "pop", "x", "NA") +
                            line("B", "2010-01-02", "3", "pop", "x", "") + line("C", "2010-01-02", "3", "pop", "x", "n/a"));
    for (const auto& r : rows) {
        CHECK_FALSE(r.malformed);
        CHECK_FALSE(r.audio[0].has_value());
    }
}

TEST_CASE("dates accept a trailing time part") {
    CHECK(parse_date("2019-07-06")->to_string() == "2019-07-06");
    CHECK(parse_date("2019-07-06 00:00:00")->to_string() == "2019-07-06");
    CHECK_FALSE(parse_date("2019-13-01"));
    CHECK_FALSE(parse_date("2019-02-30"));
    CHECK_FALSE(parse_date("07/06/2019"));
}

TEST_CASE("three weekly rows aggregate to one song") {
    const auto rows = parse(std::string(kHeader) + line("Song", "2010-01-09", "40") + line("Song", "2010-01-16", "12") +
                            line("Song", "2010-01-23", "25"));
    const auto songs = aggregate_songs(rows);
    REQUIRE(songs.size() == 1);
    CHECK(songs[0].weeks_on_chart == 3);
    CHECK(songs[0].peak_rank == 12);
}

TEST_CASE("two distinct songs stay separate; key folds case and spacing") {
    const auto rows = parse(std::string(kHeader) + line("Song", "2010-01-09", "40") + line("Other", "2010-01-16", "12") +
                            line("  song ", "2010-01-23", "25"));
    const auto songs = aggregate_songs(rows);
    REQUIRE(songs.size() == 2);
    CHECK(songs[0].weeks_on_chart == 2);
    CHECK(song_key("Hello  World", "X") == song_key("hello world", "x"));
}

TEST_CASE("fields come from the earliest week; conflicting audio warns") {
    const auto rows = parse(std::string(kHeader) + line("S", "2010-02-01", "40", "rock", "late words", "0.9") +
                            line("S", "2010-01-01", "30", "pop", "early words", "0.1"));
    std::vector<std::string> warnings;
    log::ScopedSink capture([&](log::Level l, std::string_view m) {
        if (l == log::Level::warn) warnings.emplace_back(m);
    });
    const auto songs = aggregate_songs(rows);
    REQUIRE(songs.size() == 1);
    CHECK(songs[0].broad_genre == "pop");
    CHECK(songs[0].lyrics == "early words");
    CHECK(*songs[0].audio[0] == 0.1);
    CHECK(warnings.size() == 1);
}

TEST_CASE("aggregation is idempotent on one-row-per-song data and conserves rows") {
    const auto rows = parse(fixture::clean_chart_csv(20));
    const auto songs = aggregate_songs(rows);
    REQUIRE(songs.size() == 20);
    for (const auto& s : songs) CHECK(s.weeks_on_chart == 1);

    fixture::ChartOptions o;
    o.with_defects = true;
    const auto chart = parse(fixture::chart_csv(o));
    const auto valid = std::count_if(chart.begin(), chart.end(), [](const RawRow& r) { return !r.malformed; });
    const auto agg = aggregate_songs(chart);
    const int weeks = std::accumulate(agg.begin(), agg.end(), 0, [](int a, const SongRecord& s) { return a + s.weeks_on_chart; });
    CHECK(weeks == valid);
}

TEST_CASE("clean removes empty lyrics, missing audio and unknown genres once each") {
    const auto rows = parse(std::string(kHeader) + line("A", "2010-01-02", "3", "pop", "") +
                            line("B", "2010-01-02", "3", "pop", "words", "") + line("C", "2010-01-02", "3", "jazz") +
                            line("D", "2010-01-02", "3", "pop", "", "") + line("E", "2010-01-02", "3", "R&B"));
    const auto result = clean(aggregate_songs(rows));
    CHECK(result.stats.input == 5);
    CHECK(result.stats.retained == 1);
    CHECK(result.stats.empty_lyrics == 1);
    CHECK(result.stats.missing_audio == 2);
    CHECK(result.stats.unknown_genre == 1);
    CHECK(result.stats.removed() == 4);
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].title == "E");
}

TEST_CASE("complete record is retained unchanged") {
    const auto songs = aggregate_songs(parse(fixture::clean_chart_csv(10)));
    const auto result = clean(songs);
    CHECK(result.records == songs);
}

TEST_CASE("label boundary") {
    CHECK(label_for_peak(10) == 1);
    CHECK(label_for_peak(11) == 0);
    CHECK(label_for_peak(1) == 1);
    CHECK(label_for_peak(100) == 0);
}

TEST_CASE("every cleaned record has label = [peak <= 10]") {
    auto songs = clean(aggregate_songs(parse(fixture::chart_csv()))).records;
    assign_labels(songs);
    for (const auto& s : songs) {
        REQUIRE(s.label);
        CHECK(*s.label == (s.peak_rank <= 10 ? 1 : 0));
    }
}

TEST_CASE("cleaned csv round trip is exact") {
    auto songs = clean(aggregate_songs(parse(fixture::chart_csv()))).records;
    assign_labels(songs);
    std::ostringstream out;
    write_cleaned_csv(out, songs);
    std::istringstream in(out.str());
    const auto back = read_cleaned_csv(in);
    CHECK(back == songs);
}

TEST_CASE("observed date range") {
    const auto rows = parse(std::string(kHeader) + line("A", "2011-05-02", "3") + line("B", "2009-01-02", "3") +
                            line("C", "bad", "3"));
    const auto r = observed_date_range(rows);
    CHECK(r.first->to_string() == "2009-01-02");
    CHECK(r.last->to_string() == "2011-05-02");
}
