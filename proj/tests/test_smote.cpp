#include "hitpred/error.hpp"
#include "hitpred/featureng.hpp"
#include "hitpred/log.hpp"
#include "hitpred/smote.hpp"

#include "testing.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace hitpred;
using namespace hitpred::smote;

namespace {

featureng::FeatureMatrix imbalanced(std::size_t n, std::size_t d, std::size_t positives, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> r(d);
        for (auto& v : r) v = rng.uniform();
        rows.push_back(r);
        labels.push_back(i < positives ? 1 : 0);
    }
    return featureng::apply_minmax(featureng::fit_minmax(testing::make_matrix(rows, labels)),
                                   testing::make_matrix(rows, labels));
}

std::size_t count(const std::vector<int>& v, int x) { return static_cast<std::size_t>(std::count(v.begin(), v.end(), x)); }

}  // namespace

TEST_CASE("classes are balanced exactly and original rows are untouched") {
    const auto train = imbalanced(40, 3, 9, 1);
    SmoteConfig c;
    c.seed = 5;
    const auto r = smote_oversample(train, c);
    CHECK(r.minority_label == 1);
    CHECK(r.k_used == 5);
    CHECK(count(r.data.labels, 1) == 31);
    CHECK(count(r.data.labels, 0) == 31);
    REQUIRE(r.provenance.size() == 22);
    for (std::size_t i = 0; i < train.rows(); ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(r.data.values(i, j) == train.values(i, j));
        CHECK(r.data.labels[i] == train.labels[i]);
        CHECK(r.data.ids[i] == train.ids[i]);
    }
    CHECK(r.data.ids[40] == "synthetic:0");
}

TEST_CASE("synthetic rows sit on their recorded segments and inside [0,1]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto train = imbalanced(50, 4, 8 + seed % 5, seed);
        SmoteConfig c;
        c.seed = seed;
        const auto r = smote_oversample(train, c);
        for (std::size_t s = 0; s < r.provenance.size(); ++s) {
            const auto& p = r.provenance[s];
            CHECK(train.labels[p.base_row] == 1);
            CHECK(train.labels[p.neighbour_row] == 1);
            CHECK(p.base_row != p.neighbour_row);
            CHECK((p.delta >= 0 && p.delta < 1));
            for (std::size_t j = 0; j < 4; ++j) {
                const double x = train.values(p.base_row, j);
                const double y = train.values(p.neighbour_row, j);
                const double v = r.data.values(train.rows() + s, j);
                CHECK(v >= std::min(x, y) - 1e-12);
                CHECK(v <= std::max(x, y) + 1e-12);
                CHECK(std::abs(v - (x + p.delta * (y - x))) <= 1e-12);
                CHECK((v >= 0.0 && v <= 1.0));
            }
        }
    }
}

TEST_CASE("identical minority rows reproduce themselves") {
    std::vector<std::vector<double>> rows = {{0.3, 0.7}, {0.3, 0.7}, {0.3, 0.7}, {0.1, 0.2}, {0.9, 0.1},
                                             {0.4, 0.4}, {0.5, 0.6}, {0.2, 0.8}, {0.6, 0.9}};
    const auto train = testing::make_matrix(rows, {1, 1, 1, 0, 0, 0, 0, 0, 0});
    const auto r = smote_oversample(train, SmoteConfig{});
    for (std::size_t i = train.rows(); i < r.data.rows(); ++i) {
        CHECK(r.data.values(i, 0) == 0.3);
        CHECK(r.data.values(i, 1) == 0.7);
    }
}

TEST_CASE("fixed delta interpolates to the exact point") {
    const auto train = testing::make_matrix({{0.0}, {1.0}, {0.5}, {0.2}, {0.9}}, {1, 1, 0, 0, 0});
    SmoteConfig c;
    c.fixed_delta = 0.25;
    const auto r = smote_oversample(train, c);
    REQUIRE(r.data.rows() == 6);
    CHECK(r.data.values(5, 0) == 0.25);
    CHECK(r.provenance[0].base_row == 0);
    CHECK(r.provenance[0].neighbour_row == 1);
}

TEST_CASE("base rows are cycled round-robin") {
    const auto train = imbalanced(30, 2, 4, 3);
    const auto r = smote_oversample(train, SmoteConfig{});
    for (std::size_t s = 0; s < r.provenance.size(); ++s) CHECK(r.provenance[s].base_row == s % 4);
}

TEST_CASE("k shrinks with a warning when the minority is small") {
    const auto train = imbalanced(20, 2, 3, 4);
    std::vector<std::string> warnings;
    log::ScopedSink capture([&](log::Level l, std::string_view m) {
        if (l == log::Level::warn) warnings.emplace_back(m);
    });
    const auto r = smote_oversample(train, SmoteConfig{});
    CHECK(r.k_used == 2);
    CHECK(warnings.size() == 1);
}

TEST_CASE("label 0 can be the minority") {
    const auto base = imbalanced(20, 2, 15, 6);
    const auto r = smote_oversample(base, SmoteConfig{});
    CHECK(r.minority_label == 0);
    CHECK(count(r.data.labels, 0) == 15);
}

TEST_CASE("target count and error cases") {
    const auto train = imbalanced(20, 2, 5, 7);
    SmoteConfig c;
    c.target_count = 8;
    CHECK(count(smote_oversample(train, c).data.labels, 1) == 8);
    c.target_count = 4;
    CHECK_THROWS_AS(smote_oversample(train, c), ParameterError);
    c = {};
    c.k_neighbors = 0;
    CHECK_THROWS_AS(smote_oversample(train, c), ParameterError);
    CHECK_THROWS_AS(smote_oversample(imbalanced(10, 2, 1, 8), SmoteConfig{}), DataError);
}

TEST_CASE("deterministic under a fixed seed") {
    const auto train = imbalanced(60, 3, 11, 9);
    SmoteConfig c;
    c.seed = 99;
    const auto a = smote_oversample(train, c);
    const auto b = smote_oversample(train, c);
    CHECK(a.data.values == b.data.values);
    c.seed = 100;
    CHECK_FALSE(smote_oversample(train, c).data.values == a.data.values);
}

TEST_CASE("coded columns can be snapped to observed minority values") {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    Rng rng(10);
    for (int i = 0; i < 30; ++i) {
        rows.push_back({rng.uniform(), static_cast<double>(rng.index(6)) / 5.0});
        labels.push_back(i < 6 ? 1 : 0);
    }
    const auto train = testing::make_matrix(rows, labels, {"energy", "genre_class"});
    SmoteConfig c;
    c.round_categorical = true;
    const auto r = smote_oversample(train, c);
    std::set<double> observed;
    for (int i = 0; i < 6; ++i) observed.insert(rows[static_cast<std::size_t>(i)][1]);
    for (std::size_t i = train.rows(); i < r.data.rows(); ++i) CHECK(observed.count(r.data.values(i, 1)));
}

TEST_CASE("provenance csv") {
    const auto r = smote_oversample(imbalanced(10, 2, 3, 11), SmoteConfig{});
    std::ostringstream out;
    write_provenance_csv(out, r.provenance);
    const auto text = out.str();
    CHECK(text.rfind("synthetic_row,base_row,neighbour_row,delta\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.provenance.size() + 1));
}
