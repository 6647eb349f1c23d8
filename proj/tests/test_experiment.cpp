#include "hitpred/error.hpp"
#include "hitpred/experiment.hpp"
#include "hitpred/log.hpp"

#include "fixture.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace hitpred;
using namespace hitpred::experiment;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("hitpred_" + name)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig quick_config(const fs::path& dir, const std::string& csv) {
    std::ofstream(dir / "input.csv", std::ios::binary) << csv;
    ExperimentConfig c;
    c.input = dir / "input.csv";
    c.output_dir = dir / "out";
    c.lda_iterations = 30;
    c.rf.n_trees = 20;
    c.rf.threads = 1;
    c.mlp.max_iter = 150;
    return c;
}

bool contains(const std::vector<std::string>& v, const std::string& x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

TEST_CASE("feature set definitions") {
    const auto audio = feature_set_columns(FeatureSet::audio);
    const auto meta = feature_set_columns(FeatureSet::meta_audio);
    const auto nfe = feature_set_columns(FeatureSet::nfe_audio);
    const auto all = feature_set_columns(FeatureSet::all);
    CHECK(audio.size() == 12);
    CHECK(meta.size() == 14);
    CHECK(nfe.size() == 15);
    CHECK(all.size() == 16);
    for (const auto& c : audio) CHECK(contains(nfe, c));
    for (const auto& c : nfe) CHECK(contains(all, c));
    CHECK(contains(meta, "weeks_on_chart"));
    CHECK(contains(meta, "genre_class"));
    CHECK_FALSE(contains(meta, "popularity_continuity"));
    CHECK(contains(nfe, "title_topic"));
    CHECK_FALSE(contains(nfe, "lyrics_topic"));
    CHECK(all == featureng::full_feature_columns());
}

TEST_CASE("feature set names") {
    for (auto f : kAllFeatureSets) {
        CHECK(parse_feature_set(to_string(f)) == f);
        CHECK(parse_feature_set(display_name(f)) == f);
    }
    CHECK(parse_feature_set("all") == FeatureSet::all);
    CHECK_THROWS_AS(parse_feature_set("lyrics"), ConfigError);
}

TEST_CASE("config json round trip and validation") {
    ExperimentConfig c;
    c.seed = 9;
    c.models = {classifiers::ModelKind::rf, classifiers::ModelKind::lr};
    c.feature_sets = {FeatureSet::all};
    c.lda_alpha = 0.3;
    c.lr.lambda = 0.2;
    c.rf.threads = 3;
    c.columns.title = "song";
    c.smote_before_cv = true;
    const auto back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(to_json(config_from_json(to_json(ExperimentConfig{}))) == to_json(ExperimentConfig{}));
    c.train_ratio = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("sub-seeds are distinct and stable") {
    const auto a = derive_seeds(42), b = derive_seeds(42);
    CHECK(a.split == b.split);
    std::set<std::uint64_t> s = {a.split, a.folds, a.smote, a.lda_title, a.lda_lyrics};
    for (auto k : classifiers::kAllModels) s.insert(a.model(k));
    CHECK(s.size() == 10);
    CHECK(derive_seeds(43).split != a.split);
}

TEST_CASE("prepare on an already clean fixture keeps every row") {
    TempDir t("prep_clean");
    const auto c = quick_config(t.path, fixture::clean_chart_csv(10));
    const auto d = cmd_prepare(c);
    CHECK(d.songs.size() == 10);
    CHECK(d.stats.removed() == 0);
    CHECK(fs::exists(c.output_dir / "cleaned.csv"));
    const auto stats = nlohmann::json::parse(slurp(c.output_dir / "prepare_stats.json"));
    CHECK(stats["retained"] == 10);
    CHECK(stats["hits"].get<int>() + stats["non_hits"].get<int>() == 10);
}

TEST_CASE("prepare reports a lyric-less song as one removal") {
    TempDir t("prep_defect");
    fixture::ChartOptions o;
    o.with_defects = true;
    const auto c = quick_config(t.path, fixture::chart_csv(o));
    const auto d = cmd_prepare(c);
    CHECK(d.stats.removed() == 1);
    CHECK(d.stats.empty_lyrics == 1);
    CHECK(d.malformed_rows == 1);
}

TEST_CASE("topics: K values, bounded top words, identical reruns") {
    TempDir t("topics");
    const auto c = quick_config(t.path, fixture::chart_csv());
    const auto a = cmd_topics(c);
    CHECK(a.title.topics == 10);
    CHECK(a.lyrics.topics == 20);
    for (int k = 0; k < 20; ++k) CHECK(a.lyrics.top_words(static_cast<std::size_t>(k), 10).size() <= 10);
    const auto first_title = slurp(c.output_dir / "title_topics.json");
    const auto first_lyrics = slurp(c.output_dir / "lyrics_topics.json");
    cmd_topics(c);
    CHECK(slurp(c.output_dir / "title_topics.json") == first_title);
    CHECK(slurp(c.output_dir / "lyrics_topics.json") == first_lyrics);
    const auto md = slurp(c.output_dir / "topics.md");
    CHECK(md.find("Lyrics topics") != std::string::npos);
}

TEST_CASE("persisted topics are reused only when they match the configuration") {
    TempDir t("topics_reuse");
    auto c = quick_config(t.path, fixture::chart_csv());
    const auto songs = load_or_prepare(c);
    const auto a = load_or_fit_topics(songs, c);
    const auto b = load_or_fit_topics(songs, c);
    CHECK(a.title_topics == b.title_topics);
    c.lda_iterations = 31;
    const auto d = load_or_fit_topics(songs, c);
    CHECK(d.title.iterations == 31);
}

TEST_CASE("ablation covers 5 models x 4 feature sets with report files") {
    TempDir t("ablate");
    const auto c = quick_config(t.path, fixture::chart_csv());
    const auto cells = cmd_ablate(c);
    REQUIRE(cells.size() == 20);
    for (const auto& r : cells) {
        CHECK(r.error.empty());
        CHECK(r.train_hits * 2 == r.train_rows);
        CHECK(r.columns == feature_set_columns(r.feature_set));
        const auto name = cell_name(r.model, r.feature_set);
        CHECK(fs::exists(c.output_dir / "cells" / (name + ".json")));
        CHECK(fs::exists(c.output_dir / "roc" / (name + ".csv")));
        CHECK(r.report.per_fold.size() == 5);
    }
    const auto md = slurp(c.output_dir / "ablation.md");
    CHECK(std::count(md.begin(), md.end(), '\n') == 22);
    CHECK(md.find("| RF (NFE+audio+lyrics) |") != std::string::npos);
    const auto csv = slurp(c.output_dir / "ablation.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 21);
}

TEST_CASE("report precision: 2-decimal percentages and 3-decimal AUC, full precision in JSON") {
    CellResult r;
    r.model = classifiers::ModelKind::lr;
    r.feature_set = FeatureSet::audio;
    r.columns = feature_set_columns(FeatureSet::audio);
    r.report.accuracy = 0.891234;
    r.report.auc = 0.91249;
    r.report.per_fold = {{0.5, 0.6}, {0.6, 0.7}};
    const auto md = ablation_markdown({r});
    CHECK(md.find("| LR (Audio) | 55.00% | 0.650 | 89.12% | 0.912 | 12 |") != std::string::npos);
    CHECK(to_json(r)["report"]["accuracy"].get<double>() == 0.891234);
}

TEST_CASE("a failing cell is recorded and the others proceed") {
    TempDir t("ablate_fail");
    auto c = quick_config(t.path, fixture::chart_csv());
    c.models = {classifiers::ModelKind::knn, classifiers::ModelKind::nb};
    c.feature_sets = {FeatureSet::audio};
    c.knn.k = 100000;
    std::vector<std::string> errors;
    log::ScopedSink capture([&](log::Level l, std::string_view m) {
        if (l == log::Level::error) errors.emplace_back(m);
    });
    const auto cells = cmd_ablate(c);
    REQUIRE(cells.size() == 2);
    CHECK_FALSE(cells[0].error.empty());
    CHECK(cells[1].error.empty());
    CHECK(errors.size() == 1);
    CHECK(slurp(c.output_dir / "ablation.md").find("error") != std::string::npos);
}

TEST_CASE("selection inside cells and the select command") {
    TempDir t("select");
    auto c = quick_config(t.path, fixture::chart_csv());
    const auto traces = cmd_select(c);
    REQUIRE(traces.size() == 5);
    const auto md = slurp(c.output_dir / "selection.md");
    for (auto k : classifiers::kAllModels) {
        CHECK(md.find("| " + std::string(classifiers::to_string(k))) != std::string::npos);
        CHECK(fs::exists(c.output_dir / "selection" / (std::string(classifiers::to_string(k)) + ".json")));
    }
    cmd_select(c);
    CHECK(slurp(c.output_dir / "selection.md") == md);

    c.selection = true;
    c.models = {classifiers::ModelKind::lr};
    c.feature_sets = {FeatureSet::all};
    const auto cells = cmd_ablate(c);
    REQUIRE(cells[0].selection.has_value());
    if (!cells[0].selection->selected.empty()) CHECK(cells[0].columns == cells[0].selection->selected);
}

TEST_CASE("evaluate persists a model that reproduces its test scores") {
    TempDir t("evaluate");
    auto c = quick_config(t.path, fixture::chart_csv());
    c.models = {classifiers::ModelKind::lr};
    c.feature_sets = {FeatureSet::nfe_audio};
    const auto r = cmd_evaluate(c);
    REQUIRE(r.error.empty());
    const auto model = classifiers::classifier_from_json(
        nlohmann::json::parse(slurp(c.output_dir / "models" / "lr_NFE_AUDIO.json")));
    CHECK(model->columns() == feature_set_columns(FeatureSet::nfe_audio));
    CHECK(fs::exists(c.output_dir / "models" / "lr_NFE_AUDIO.minmax.json"));
}

TEST_CASE("manifest holds enough to rerun identically") {
    TempDir t("manifest");
    auto c = quick_config(t.path, fixture::chart_csv());
    c.models = {classifiers::ModelKind::nb, classifiers::ModelKind::rf};
    const auto songs = load_or_prepare(c);
    cmd_ablate(c);
    write_manifest(c, songs, {"ablate", 1.0});
    const auto m = nlohmann::json::parse(slurp(c.output_dir / "manifest.json"));
    CHECK(m["dataset"]["rows"] == songs.size());
    CHECK(m["seeds"]["split"] == derive_seeds(c.seed).split);
    CHECK(m["versions"]["hitpred"] == std::string(kVersion));
    CHECK(m["timing"]["ablate"] == 1.0);

    auto again = config_from_json(m["config"]);
    again.output_dir = t.path / "again";
    cmd_ablate(again);
    CHECK(slurp(again.output_dir / "ablation.csv") == slurp(c.output_dir / "ablation.csv"));
    CHECK(slurp(again.output_dir / "cells" / "rf_ALL.json") == slurp(c.output_dir / "cells" / "rf_ALL.json"));
    CHECK(dataset_fingerprint(load_or_prepare(again)) == m["dataset"]);
}

TEST_CASE("missing input is a configuration error") {
    ExperimentConfig c;
    c.input = "/nonexistent/file.csv";
    c.output_dir = fs::temp_directory_path() / "hitpred_missing_input";
    CHECK_THROWS_AS(prepare_data(c), ConfigError);
}
