#include "hitpred/error.hpp"
#include "hitpred/featsel.hpp"

#include "testing.hpp"

#include <doctest.h>

#include <set>

using namespace hitpred;
using namespace hitpred::featsel;

namespace {

// Noise columns plus one that equals the label, placed in the middle.
featureng::FeatureMatrix with_perfect_column(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = rng.uniform() < 0.35 ? 1 : 0;
        rows.push_back({rng.uniform(), rng.uniform(), static_cast<double>(y), rng.uniform()});
        labels.push_back(y);
    }
    return testing::make_matrix(rows, labels, {"noise_a", "noise_b", "perfect", "noise_c"});
}

classifiers::ModelSpec spec(classifiers::ModelKind k) {
    classifiers::ModelSpec s;
    s.kind = k;
    s.seed = 3;
    s.rf.n_trees = 15;
    s.rf.threads = 1;
    s.mlp.max_iter = 400;
    s.mlp.hidden_layers = 1;
    s.mlp.learning_rate = 0.5;
    return s;
}

const std::vector<std::string> kCandidates = {"noise_a", "noise_b", "perfect", "noise_c"};

}  // namespace

TEST_CASE("a perfect predictor is selected first with CV accuracy 1") {
    const auto m = with_perfect_column(80, 1);
    for (auto kind : {classifiers::ModelKind::knn, classifiers::ModelKind::nb, classifiers::ModelKind::rf,
                      classifiers::ModelKind::lr}) {
        CAPTURE(classifiers::to_string(kind));
        SelectionOptions o;
        o.fold_seed = 7;
        const auto t = forward_select(spec(kind), m, kCandidates, o);
        REQUIRE_FALSE(t.steps.empty());
        CHECK(t.steps[0].feature == "perfect");
        CHECK(t.steps[0].score == 1.0);
        CHECK(t.steps.size() == 1);
    }
}

TEST_CASE("trace scores strictly increase; selection is a duplicate-free subset") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto m = testing::random_matrix(70, 6, seed, 0.8);
        std::vector<std::string> candidates = m.column_names;
        SelectionOptions o;
        o.fold_seed = seed;
        const auto t = forward_select(spec(classifiers::ModelKind::lr), m, candidates, o);
        double prev = t.baseline;
        std::set<std::string> seen;
        for (const auto& s : t.steps) {
            CHECK(s.score > prev);
            prev = s.score;
            CHECK(seen.insert(s.feature).second);
            CHECK(std::find(candidates.begin(), candidates.end(), s.feature) != candidates.end());
        }
        CHECK(t.selected.size() == t.steps.size());
    }
}

TEST_CASE("baseline is majority-class accuracy, or 0.5 for AUC") {
    const auto m = testing::make_matrix({{0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}},
                                        {1, 0, 0, 0, 0, 0, 0, 1, 0, 0});
    const auto folds = evaluation::kfold(m.labels, 2, true, 1);
    CHECK(baseline_score(m, folds, Objective::accuracy) == 0.8);
    CHECK(baseline_score(m, folds, Objective::auc) == 0.5);
}

TEST_CASE("pure noise with a majority-biased model can leave the trace empty") {
    Rng rng(4);
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) {
        rows.push_back({rng.uniform(), rng.uniform()});
        labels.push_back(i % 5 == 0 ? 1 : 0);
    }
    const auto m = testing::make_matrix(rows, labels);
    auto s = spec(classifiers::ModelKind::knn);
    s.knn.k = 15;
    SelectionOptions o;
    const auto t = forward_select(s, m, m.column_names, o);
    CHECK(t.baseline == doctest::Approx(0.8));
    for (const auto& step : t.steps) CHECK(step.score > 0.8);
}

TEST_CASE("candidate list errors") {
    const auto m = with_perfect_column(20, 2);
    CHECK_THROWS_AS(forward_select(spec(classifiers::ModelKind::lr), m, std::vector<std::string>{}, {}), ParameterError);
    CHECK_THROWS_AS(forward_select(spec(classifiers::ModelKind::lr), m, std::vector<std::string>{"missing"}, {}),
                    ParameterError);
}

TEST_CASE("selection is deterministic and independent of worker count") {
    const auto m = testing::random_matrix(60, 5, 9, 0.6);
    SelectionOptions o;
    o.fold_seed = 11;
    o.per_fold_smote = smote::SmoteConfig{};
    const auto a = forward_select(spec(classifiers::ModelKind::rf), m, m.column_names, o);
    o.workers = 3;
    const auto b = forward_select(spec(classifiers::ModelKind::rf), m, m.column_names, o);
    CHECK(to_json(a) == to_json(b));
}

TEST_CASE("markdown marks novel features") {
    SelectionTrace t;
    t.model = classifiers::ModelKind::rf;
    t.selected = {"energy", "popularity_continuity", "lyrics_topic"};
    const auto md = selection_markdown(std::vector<SelectionTrace>{t});
    CHECK(md.find("*popularity_continuity*") != std::string::npos);
    CHECK(md.find("**lyrics_topic**") != std::string::npos);
    CHECK(md.find("*energy*") == std::string::npos);
    CHECK(is_novel_feature("genre_class"));
    CHECK(is_novel_feature("title_topic"));
    CHECK_FALSE(is_novel_feature("tempo"));
}
