#include "hitpred/error.hpp"
#include "hitpred/textprep.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>

using namespace hitpred;
using namespace hitpred::textprep;

TEST_CASE("punctuation is stripped") {
    CHECK(tokenize_normalize("Stronger!!", {}).tokens == std::vector<std::string>{"stronger"});
}

TEST_CASE("short tokens are dropped") {
    CHECK(tokenize_normalize("Me & You", load_stopwords()).tokens.empty());
}

TEST_CASE("stopwords and short fragments vanish") {
    CHECK(tokenize_normalize("Party in the U.S.A.", {"party"}).tokens.empty());
    CHECK(tokenize_normalize("Party in the U.S.A.", {}).tokens == std::vector<std::string>{"party"});
}

TEST_CASE("digits and apostrophes split tokens") {
    CHECK(tokenize_normalize("don't stop 4ever lovin'", {}).tokens == std::vector<std::string>{"stop", "ever", "lovin"});
}

TEST_CASE("builtin stopword list") {
    const auto s = load_stopwords();
    CHECK(s.count("the"));
    CHECK(s.count("would"));
    CHECK_FALSE(s.count("love"));
    CHECK_FALSE(s.count("life"));
    CHECK_FALSE(s.count("girls"));
    CHECK_FALSE(s.count("party"));
    CHECK(s.size() == 318);
}

TEST_CASE("override file replaces the list") {
    const auto path = std::filesystem::temp_directory_path() / "hitpred_stopwords_test.txt";
    {
        std::ofstream out(path);
        out << "Alpha\n\nbeta\n";
    }
    const auto s = load_stopwords(path);
    CHECK(s.size() == 2);
    CHECK(s.count("alpha"));
    CHECK(s.count("beta"));
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_stopwords(path), ConfigError);
}

TEST_CASE("tokens are lowercase letter runs of length >= 4, and re-tokenizing is idempotent") {
    const auto stop = load_stopwords();
    const std::regex shape("[a-z]{4,}");
    const std::vector<std::string> texts = {"Baby, baby, baby oh! Like BABY, baby, baby no",
                                            "I've been reading books of old, the legends and the myths",
                                            "",
                                            "   ",
                                            "Caf\xC3\xA9 del Mar -- 2000's remix (feat. someone)"};
    for (const auto& t : texts) {
        const auto doc = tokenize_normalize(t, stop);
        std::string joined;
        for (const auto& w : doc.tokens) {
            CHECK(std::regex_match(w, shape));
            CHECK_FALSE(stop.count(w));
            joined += w + " ";
        }
        CHECK(tokenize_normalize(joined, stop).tokens == doc.tokens);
        CHECK(tokenize_normalize(t, stop).tokens == doc.tokens);
    }
}

TEST_CASE("corpus doc ids follow input positions") {
    const std::vector<std::string> texts = {"alpha beta", "", "gamma"};
    const auto docs = tokenize_corpus(texts, {});
    REQUIRE(docs.size() == 3);
    CHECK(docs[1].doc_id == 1);
    CHECK(docs[1].tokens.empty());
    CHECK(docs[2].tokens == std::vector<std::string>{"gamma"});
}
