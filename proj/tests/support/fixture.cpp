#include "fixture.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/rng.hpp"

#include <array>
#include <sstream>
#include <vector>

namespace fixture {

namespace {

const std::array<const char*, 6> kGenres = {"country", "edm", "pop", "r&b", "rock", "rap"};
const std::array<const char*, 10> kHitWords = {"dance", "night", "party", "shine", "forever",
                                               "lights", "summer", "fire", "dream", "together"};
const std::array<const char*, 10> kOtherWords = {"truck", "whiskey", "river", "broken", "highway",
                                                 "lonely", "church", "mountain", "rain", "letter"};
const std::array<const char*, 8> kTitleWords = {"heart", "baby", "money", "world", "story", "magic", "angel", "road"};

std::string words(hitpred::Rng& rng, const auto& pool, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += pool[rng.index(pool.size())];
    }
    return out;
}

std::string num(double v) { return hitpred::csv::format_double(v); }

struct Song {
    std::string title, artist, genre, lyrics;
    std::array<double, 12> audio{};
    int weeks = 1;
    int best = 50;
};

Song make_song(hitpred::Rng& rng, std::size_t i, bool hit) {
    Song s;
    s.title = words(rng, kTitleWords, 2) + " " + std::to_string(i);
    s.artist = "Artist " + std::to_string(i % 37);
    s.genre = kGenres[hit ? 2 + rng.index(4) : rng.index(6)];
    s.lyrics = hit ? words(rng, kHitWords, 12) + " " + words(rng, kOtherWords, 3)
                   : words(rng, kOtherWords, 12) + " " + words(rng, kHitWords, 3);
    const double shift = hit ? 0.15 : 0.0;
    s.audio = {0.4 + shift + 0.3 * rng.uniform(),       // energy
               0.05 + 0.3 * rng.uniform(),              // liveness
               80 + 80 * rng.uniform(),                 // tempo
               0.03 + 0.2 * rng.uniform(),              // speechiness
               0.5 - shift + 0.4 * rng.uniform(),       // acousticness
               static_cast<double>(3 + rng.index(2)),   // time_signature
               static_cast<double>(rng.index(12)),      // key
               150000 + 100000 * rng.uniform(),         // duration_ms
               -12 + 4 * shift + 6 * rng.uniform(),     // loudness
               0.2 + shift + 0.5 * rng.uniform(),       // valence
               static_cast<double>(rng.index(2)),       // mode
               0.35 + shift + 0.35 * rng.uniform()};    // danceability
    s.best = hit ? 1 + static_cast<int>(rng.index(10)) : 11 + static_cast<int>(rng.index(90));
    return s;
}

void write_header(std::ostream& out) {
    hitpred::csv::write_record(out, {"title", "artist", "date", "rank", "broad_genre", "lyrics", "energy", "liveness",
                                     "tempo", "speechiness", "acousticness", "time_signature", "key", "duration_ms",
                                     "loudness", "valence", "mode", "danceability"});
}

void write_row(std::ostream& out, const Song& s, int week, int rank) {
    const int day = 1 + week * 7;
    const int month = 1 + (day / 28) % 12;
    const int year = 2000 + day / 336;
    char date[32];
    std::snprintf(date, sizeof date, "%04d-%02d-%02d", year, month, 1 + day % 28);
    std::vector<std::string> f = {s.title, s.artist, date, std::to_string(rank), s.genre, s.lyrics};
    for (double v : s.audio) f.push_back(num(v));
    hitpred::csv::write_record(out, f);
}

}  // namespace

std::string chart_csv(const ChartOptions& o) {
    hitpred::Rng rng(o.seed);
    std::ostringstream out;
    write_header(out);
    std::size_t written = 0;
    for (std::size_t i = 0; written < o.rows; ++i) {
        const bool hit = rng.uniform() < 0.25;
        const Song s = make_song(rng, i, hit);
        int weeks = hit ? 3 + static_cast<int>(rng.index(4)) : 1 + static_cast<int>(rng.index(3));
        weeks = std::min<int>(weeks, static_cast<int>(o.rows - written));
        const int start = static_cast<int>(rng.index(40));
        for (int w = 0; w < weeks; ++w) {
            const int rank = w == weeks / 2 ? s.best : std::min(100, s.best + 1 + static_cast<int>(rng.index(15)));
            write_row(out, s, start + w, rank);
            ++written;
        }
    }
    if (o.with_defects) {
        out << "broken row,with,too,few\n";
        Song s = make_song(rng, 9999, false);
        s.lyrics.clear();
        write_row(out, s, 1, 60);
    }
    return out.str();
}

std::string clean_chart_csv(std::size_t n, std::uint64_t seed) {
    hitpred::Rng rng(seed);
    std::ostringstream out;
    write_header(out);
    for (std::size_t i = 0; i < n; ++i) write_row(out, make_song(rng, i, i % 3 == 0), static_cast<int>(i), 5 + 10 * (i % 3));
    return out.str();
}

}  // namespace fixture
