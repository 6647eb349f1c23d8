#pragma once

// End-to-end pipeline: clean -> topics -> engineer -> split -> min-max on
// train -> SMOTE on train -> (forward selection) -> fit -> evaluate, plus
// the model x feature-set ablation reports.

#include "hitpred/classifiers.hpp"
#include "hitpred/evaluation.hpp"
#include "hitpred/featsel.hpp"
#include "hitpred/featureng.hpp"
#include "hitpred/ingest.hpp"
#include "hitpred/lda.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hitpred::experiment {

inline constexpr std::string_view kVersion = "1.0.0";

enum class FeatureSet { audio, meta_audio, nfe_audio, all };

inline constexpr std::array<FeatureSet, 4> kAllFeatureSets = {FeatureSet::audio, FeatureSet::meta_audio,
                                                               FeatureSet::nfe_audio, FeatureSet::all};

std::string_view to_string(FeatureSet fs);      // AUDIO, META_AUDIO, NFE_AUDIO, ALL
std::string_view display_name(FeatureSet fs);   // Audio, Metadata+audio, ...
FeatureSet parse_feature_set(std::string_view name);  // accepts either form, case-insensitive

// AUDIO: 12 audio columns. META_AUDIO: + weeks_on_chart, genre_class.
// NFE_AUDIO: + popularity_continuity, genre_class, title_topic.
// ALL: NFE_AUDIO + lyrics_topic.
std::vector<std::string> feature_set_columns(FeatureSet fs);

struct ExperimentConfig {
    std::filesystem::path input;
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 42;
    std::vector<classifiers::ModelKind> models{classifiers::kAllModels.begin(), classifiers::kAllModels.end()};
    std::vector<FeatureSet> feature_sets{kAllFeatureSets.begin(), kAllFeatureSets.end()};
    ingest::ColumnMapping columns;
    std::filesystem::path stopwords;  // empty: built-in list

    int title_topics = 10;
    int lyrics_topics = 20;
    std::optional<double> lda_alpha;  // default 50 / K
    double lda_beta = 0.01;
    int lda_iterations = 1000;

    double train_ratio = 0.8;
    int cv_folds = 5;
    bool stratified = true;
    // Run CV on the already-oversampled training split instead of
    // oversampling inside each fold.
    bool smote_before_cv = false;

    int smote_k = 5;
    bool smote_round_categorical = false;

    bool selection = false;
    featsel::Objective selection_objective = featsel::Objective::accuracy;
    double selection_epsilon = 0.0;

    classifiers::KnnParams knn;
    classifiers::NbParams nb;
    classifiers::RfParams rf;
    classifiers::LrParams lr;
    classifiers::MlpParams mlp;

    int workers = 1;

    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Named sub-seeds fanned out from the run seed.
struct Seeds {
    std::uint64_t run = 0;
    std::uint64_t split = 0;
    std::uint64_t folds = 0;
    std::uint64_t smote = 0;
    std::uint64_t lda_title = 0;
    std::uint64_t lda_lyrics = 0;
    std::uint64_t model(classifiers::ModelKind kind) const;
};
Seeds derive_seeds(std::uint64_t run_seed);

classifiers::ModelSpec model_spec(const ExperimentConfig& c, classifiers::ModelKind kind);

// ---- prepare ----

struct PreparedData {
    std::vector<ingest::SongRecord> songs;  // cleaned and labeled
    ingest::CleanStats stats;
    std::size_t raw_rows = 0;
    std::size_t malformed_rows = 0;
    ingest::DateRange date_range;
    std::size_t hits() const;
};

PreparedData prepare_data(const ExperimentConfig& c);

// ---- topics ----

struct TopicFeatures {
    lda::TopicModel title;
    lda::TopicModel lyrics;
    std::vector<int> title_topics;
    std::vector<int> lyrics_topics;
};

// Fits the title and lyrics models (concurrently when workers > 1).
TopicFeatures fit_topics(const std::vector<ingest::SongRecord>& songs, const ExperimentConfig& c);

// 16 modelling columns plus raw weeks_on_chart (used by META_AUDIO).
featureng::FeatureMatrix master_matrix(const std::vector<ingest::SongRecord>& songs, const TopicFeatures& topics);

// ---- one ablation cell ----

struct CellResult {
    classifiers::ModelKind model = classifiers::ModelKind::lr;
    FeatureSet feature_set = FeatureSet::all;
    std::vector<std::string> columns;  // columns the final model used
    std::optional<featsel::SelectionTrace> selection;
    evaluation::EvalReport report;  // test metrics + per-fold CV metrics
    std::size_t train_rows = 0;     // after oversampling
    std::size_t train_hits = 0;
    std::size_t test_rows = 0;
    std::string error;              // non-empty when the cell failed
    nlohmann::json model_json;      // fitted model (persisted by the evaluate command)
    featureng::MinMaxParams minmax;
};

CellResult run_cell(const featureng::FeatureMatrix& master, classifiers::ModelKind model, FeatureSet fs,
                    const ExperimentConfig& c);

// ---- reports ----

std::string cell_name(classifiers::ModelKind m, FeatureSet fs);
nlohmann::json to_json(const CellResult& r);
std::string ablation_markdown(const std::vector<CellResult>& cells);
std::string ablation_csv(const std::vector<CellResult>& cells);

// ---- commands (write files under output_dir) ----

struct CommandTiming {
    std::string command;
    double seconds = 0;
};

PreparedData cmd_prepare(const ExperimentConfig& c);
TopicFeatures cmd_topics(const ExperimentConfig& c);
std::vector<CellResult> cmd_ablate(const ExperimentConfig& c);
std::vector<featsel::SelectionTrace> cmd_select(const ExperimentConfig& c);
CellResult cmd_evaluate(const ExperimentConfig& c);

// Loads <output_dir>/cleaned.csv when present, otherwise runs prepare.
std::vector<ingest::SongRecord> load_or_prepare(const ExperimentConfig& c);
// Loads the persisted topic models when present and matching the config,
// otherwise fits and persists them.
TopicFeatures load_or_fit_topics(const std::vector<ingest::SongRecord>& songs, const ExperimentConfig& c);

nlohmann::json dataset_fingerprint(const std::vector<ingest::SongRecord>& songs);
// Writes <output_dir>/manifest.json (merged with any earlier commands).
void write_manifest(const ExperimentConfig& c, const std::vector<ingest::SongRecord>& songs,
                    const CommandTiming& timing);

}  // namespace hitpred::experiment
