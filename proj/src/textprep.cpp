#include "hitpred/textprep.hpp"

#include "hitpred/error.hpp"

#include <fstream>
#include <sstream>

namespace hitpred::textprep {
namespace {

bool is_ascii_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char to_lower_ascii(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

StopwordSet parse_word_list(std::istream& in) {
    StopwordSet out;
    std::string line;
    while (std::getline(in, line)) {
        std::string word;
        for (char c : line) {
            if (c == ' ' || c == '\t' || c == '\r') continue;
            word.push_back(to_lower_ascii(c));
        }
        if (!word.empty()) out.insert(std::move(word));
    }
    return out;
}

}  // namespace

TokenDoc tokenize_normalize(std::string_view text, const StopwordSet& stopwords, std::size_t doc_id) {
    TokenDoc doc;
    doc.doc_id = doc_id;
    std::string current;
    auto flush = [&] {
        if (current.size() >= kMinTokenLength && !stopwords.contains(current)) {
            doc.tokens.push_back(current);
        }
        current.clear();
    };
    for (char c : text) {
        if (is_ascii_letter(c)) {
            current.push_back(to_lower_ascii(c));
        } else {
            flush();
        }
    }
    flush();
    return doc;
}

std::vector<TokenDoc> tokenize_corpus(std::span<const std::string> texts, const StopwordSet& stopwords) {
    std::vector<TokenDoc> docs;
    docs.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        docs.push_back(tokenize_normalize(texts[i], stopwords, i));
    }
    return docs;
}

StopwordSet load_stopwords() {
    std::istringstream in{std::string(builtin_stopword_text())};
    return parse_word_list(in);
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read stopword file '" + path.string() + "'");
    return parse_word_list(in);
}

}  // namespace hitpred::textprep
