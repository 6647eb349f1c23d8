#pragma once

// Synthetic weekly-chart CSV used by the pipeline tests.

#include <cstdint>
#include <string>

namespace fixture {

struct ChartOptions {
    std::size_t rows = 300;  // raw weekly rows
    std::uint64_t seed = 7;
    // Append one malformed row and one song without lyrics.
    bool with_defects = false;
};

// Header: title,artist,date,rank,broad_genre,lyrics + the 12 audio columns.
// Hits carry distinct audio, longer chart runs and their own lyric words, so
// every model can learn something.
std::string chart_csv(const ChartOptions& options = {});

// A cleaned-ready dataset of n distinct songs, one row each.
std::string clean_chart_csv(std::size_t n, std::uint64_t seed = 3);

}  // namespace fixture
