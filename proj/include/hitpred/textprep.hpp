#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace hitpred::textprep {

// Tokens shorter than this are dropped.
inline constexpr std::size_t kMinTokenLength = 4;

using StopwordSet = std::unordered_set<std::string>;

struct TokenDoc {
    std::size_t doc_id = 0;
    std::vector<std::string> tokens;
};

// Lowercases, splits on every byte that is not an ASCII letter, then drops
// tokens shorter than kMinTokenLength and stopwords. Order is preserved.
TokenDoc tokenize_normalize(std::string_view text, const StopwordSet& stopwords,
                            std::size_t doc_id = 0);

// Tokenizes each text; doc_id is the position in `texts`.
std::vector<TokenDoc> tokenize_corpus(std::span<const std::string> texts,
                                      const StopwordSet& stopwords);

// The embedded English list, one lowercase word per line.
std::string_view builtin_stopword_text();

StopwordSet load_stopwords();
// One word per line; blank lines ignored; words are lowercased on load.
// Throws ConfigError if the file cannot be read.
StopwordSet load_stopwords(const std::filesystem::path& path);

}  // namespace hitpred::textprep
