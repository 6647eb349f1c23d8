#include "hitpred/experiment.hpp"

#include "hitpred/csv.hpp"
#include "hitpred/error.hpp"
#include "hitpred/log.hpp"
#include "hitpred/parallel.hpp"
#include "hitpred/rng.hpp"
#include "hitpred/smote.hpp"
#include "hitpred/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

namespace hitpred::experiment {

namespace fs = std::filesystem;
using classifiers::ModelKind;

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw RunError("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const fs::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

std::optional<nlohmann::json> read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw DataError("cannot parse '" + path.string() + "': " + e.what());
    }
}

std::string fmt(const char* pattern, double v) {
    if (!std::isfinite(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

nlohmann::json optional_number(const std::optional<double>& v) {
    if (v) return *v;
    return nullptr;
}

}  // namespace

// ---------------------------------------------------------------- feature sets

std::string_view to_string(FeatureSet f) {
    switch (f) {
        case FeatureSet::audio: return "AUDIO";
        case FeatureSet::meta_audio: return "META_AUDIO";
        case FeatureSet::nfe_audio: return "NFE_AUDIO";
        case FeatureSet::all: return "ALL";
    }
    return "?";
}

std::string_view display_name(FeatureSet f) {
    switch (f) {
        case FeatureSet::audio: return "Audio";
        case FeatureSet::meta_audio: return "Metadata+audio";
        case FeatureSet::nfe_audio: return "NFE+audio";
        case FeatureSet::all: return "NFE+audio+lyrics";
    }
    return "?";
}

FeatureSet parse_feature_set(std::string_view name) {
    const std::string u = upper(name);
    for (auto f : kAllFeatureSets) {
        if (u == to_string(f) || u == upper(display_name(f))) return f;
    }
    throw ConfigError("unknown feature set '" + std::string(name) + "' (expected AUDIO, META_AUDIO, NFE_AUDIO or ALL)");
}

std::vector<std::string> feature_set_columns(FeatureSet f) {
    std::vector<std::string> cols;
    for (auto n : ingest::kAudioFeatureNames) cols.emplace_back(n);
    switch (f) {
        case FeatureSet::audio:
            break;
        case FeatureSet::meta_audio:
            cols.emplace_back(featureng::kWeeksOnChart);
            cols.emplace_back(featureng::kGenreClass);
            break;
        case FeatureSet::nfe_audio:
        case FeatureSet::all:
            cols.emplace_back(featureng::kPopularityContinuity);
            cols.emplace_back(featureng::kGenreClass);
            cols.emplace_back(featureng::kTitleTopic);
            if (f == FeatureSet::all) cols.emplace_back(featureng::kLyricsTopic);
            break;
    }
    return cols;
}

// ---------------------------------------------------------------- config

void ExperimentConfig::validate() const {
    if (models.empty()) throw ConfigError("no models selected");
    if (feature_sets.empty()) throw ConfigError("no feature sets selected");
    if (title_topics < 2 || lyrics_topics < 2) throw ConfigError("topic counts must be >= 2");
    if (lda_iterations < 1) throw ConfigError("lda iterations must be >= 1");
    if (!(lda_beta > 0) || (lda_alpha && !(*lda_alpha > 0))) throw ConfigError("LDA priors must be positive");
    if (!(train_ratio > 0 && train_ratio < 1)) throw ConfigError("train ratio must be in (0, 1)");
    if (cv_folds < 2) throw ConfigError("cv folds must be >= 2");
    if (smote_k < 1) throw ConfigError("smote k must be >= 1");
    if (knn.k < 1) throw ConfigError("knn k must be >= 1");
    if (!(nb.default_probability > 0)) throw ConfigError("nb default probability must be positive");
    if (rf.n_trees < 1 || rf.m_try < 0) throw ConfigError("invalid random forest settings");
    if (!(lr.laplace_scale > 0) || lr.max_iter < 1) throw ConfigError("invalid logistic regression settings");
    if (mlp.hidden_layers < 1 || mlp.neurons < 1 || mlp.max_iter < 1 || !(mlp.learning_rate > 0)) {
        throw ConfigError("invalid MLP settings");
    }
}

nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["input"] = c.input.string();
    j["output_dir"] = c.output_dir.string();
    j["seed"] = c.seed;
    j["models"] = nlohmann::json::array();
    for (auto m : c.models) j["models"].push_back(classifiers::to_string(m));
    j["feature_sets"] = nlohmann::json::array();
    for (auto f : c.feature_sets) j["feature_sets"].push_back(to_string(f));
    j["columns"] = {{"title", c.columns.title},   {"artist", c.columns.artist},
                    {"date", c.columns.week_date}, {"rank", c.columns.rank},
                    {"broad_genre", c.columns.broad_genre}, {"lyrics", c.columns.lyrics},
                    {"audio", c.columns.audio}};
    j["stopwords"] = c.stopwords.string();
    j["lda"] = {{"title_topics", c.title_topics},
                {"lyrics_topics", c.lyrics_topics},
                {"alpha", optional_number(c.lda_alpha)},
                {"beta", c.lda_beta},
                {"iterations", c.lda_iterations}};
    j["split"] = {{"train_ratio", c.train_ratio},
                  {"cv_folds", c.cv_folds},
                  {"stratified", c.stratified},
                  {"smote_before_cv", c.smote_before_cv}};
    j["smote"] = {{"k", c.smote_k}, {"round_categorical", c.smote_round_categorical}};
    j["selection"] = {{"enabled", c.selection},
                      {"objective", c.selection_objective == featsel::Objective::accuracy ? "accuracy" : "auc"},
                      {"epsilon", c.selection_epsilon}};
    classifiers::ModelSpec spec;
    spec.knn = c.knn;
    spec.nb = c.nb;
    spec.rf = c.rf;
    spec.lr = c.lr;
    spec.mlp = c.mlp;
    auto sj = classifiers::to_json(spec);
    sj.erase("kind");
    sj.erase("seed");
    sj["rf"]["threads"] = c.rf.threads;
    if (!c.lr.lambda) sj["lr"]["lambda"] = nullptr;
    j["models_config"] = sj;
    j["workers"] = c.workers;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig c;
        c.input = j.at("input").get<std::string>();
        c.output_dir = j.at("output_dir").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.models.clear();
        for (const auto& m : j.at("models")) c.models.push_back(classifiers::parse_model_kind(m.get<std::string>()));
        c.feature_sets.clear();
        for (const auto& f : j.at("feature_sets")) c.feature_sets.push_back(parse_feature_set(f.get<std::string>()));
        const auto& col = j.at("columns");
        c.columns.title = col.at("title").get<std::string>();
        c.columns.artist = col.at("artist").get<std::string>();
        c.columns.week_date = col.at("date").get<std::string>();
        c.columns.rank = col.at("rank").get<std::string>();
        c.columns.broad_genre = col.at("broad_genre").get<std::string>();
        c.columns.lyrics = col.at("lyrics").get<std::string>();
        auto audio = col.at("audio").get<std::vector<std::string>>();
        if (audio.size() != ingest::kAudioFeatureCount) throw ConfigError("column mapping needs 12 audio names");
        std::copy(audio.begin(), audio.end(), c.columns.audio.begin());
        c.stopwords = j.at("stopwords").get<std::string>();
        const auto& lda = j.at("lda");
        c.title_topics = lda.at("title_topics").get<int>();
        c.lyrics_topics = lda.at("lyrics_topics").get<int>();
        if (!lda.at("alpha").is_null()) c.lda_alpha = lda.at("alpha").get<double>();
        c.lda_beta = lda.at("beta").get<double>();
        c.lda_iterations = lda.at("iterations").get<int>();
        const auto& sp = j.at("split");
        c.train_ratio = sp.at("train_ratio").get<double>();
        c.cv_folds = sp.at("cv_folds").get<int>();
        c.stratified = sp.at("stratified").get<bool>();
        c.smote_before_cv = sp.at("smote_before_cv").get<bool>();
        c.smote_k = j.at("smote").at("k").get<int>();
        c.smote_round_categorical = j.at("smote").at("round_categorical").get<bool>();
        const auto& sel = j.at("selection");
        c.selection = sel.at("enabled").get<bool>();
        c.selection_objective =
            sel.at("objective").get<std::string>() == "auc" ? featsel::Objective::auc : featsel::Objective::accuracy;
        c.selection_epsilon = sel.at("epsilon").get<double>();
        auto mj = j.at("models_config");
        const bool lambda_set = !mj["lr"]["lambda"].is_null();
        if (!lambda_set) mj["lr"]["lambda"] = 0.0;
        mj["kind"] = "lr";
        mj["seed"] = 0;
        const auto spec = classifiers::model_spec_from_json(mj);
        c.knn = spec.knn;
        c.nb = spec.nb;
        c.rf = spec.rf;
        c.rf.threads = mj.at("rf").value("threads", 0);
        c.lr = spec.lr;
        if (!lambda_set) c.lr.lambda.reset();
        c.mlp = spec.mlp;
        c.workers = j.at("workers").get<int>();
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed configuration JSON: ") + e.what());
    }
}

Seeds derive_seeds(std::uint64_t run_seed) {
    Seeds s;
    s.run = run_seed;
    s.split = derive_seed(run_seed, "split");
    s.folds = derive_seed(run_seed, "folds");
    s.smote = derive_seed(run_seed, "smote");
    s.lda_title = derive_seed(run_seed, "lda:title");
    s.lda_lyrics = derive_seed(run_seed, "lda:lyrics");
    return s;
}

std::uint64_t Seeds::model(ModelKind kind) const {
    return derive_seed(run, "model:" + std::string(classifiers::to_string(kind)));
}

classifiers::ModelSpec model_spec(const ExperimentConfig& c, ModelKind kind) {
    classifiers::ModelSpec spec;
    spec.kind = kind;
    spec.knn = c.knn;
    spec.nb = c.nb;
    spec.rf = c.rf;
    spec.lr = c.lr;
    spec.mlp = c.mlp;
    spec.seed = derive_seeds(c.seed).model(kind);
    return spec;
}

// ---------------------------------------------------------------- prepare

std::size_t PreparedData::hits() const {
    std::size_t h = 0;
    for (const auto& s : songs) h += static_cast<std::size_t>(ingest::label(s));
    return h;
}

PreparedData prepare_data(const ExperimentConfig& c) {
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw ConfigError("cannot open input '" + c.input.string() + "'");
    const auto rows = ingest::parse_dataset(in, c.columns);
    PreparedData out;
    out.raw_rows = rows.size();
    out.malformed_rows = static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.malformed; }));
    out.date_range = ingest::observed_date_range(rows);
    auto cleaned = ingest::clean(ingest::aggregate_songs(rows));
    out.stats = cleaned.stats;
    out.songs = std::move(cleaned.records);
    ingest::assign_labels(out.songs);
    if (out.malformed_rows) {
        log::warn(std::to_string(out.malformed_rows) + " malformed rows excluded (run with debug logging for details)");
    }
    return out;
}

PreparedData cmd_prepare(const ExperimentConfig& c) {
    auto data = prepare_data(c);
    std::ostringstream csv_text;
    ingest::write_cleaned_csv(csv_text, data.songs);
    write_text(c.output_dir / "cleaned.csv", csv_text.str());

    const std::size_t hits = data.hits();
    nlohmann::json stats = {
        {"raw_rows", data.raw_rows},
        {"malformed_rows", data.malformed_rows},
        {"unique_songs", data.stats.input},
        {"retained", data.stats.retained},
        {"hits", hits},
        {"non_hits", data.songs.size() - hits},
        {"removed", {{"total", data.stats.removed()},
                     {"missing_audio", data.stats.missing_audio},
                     {"empty_lyrics", data.stats.empty_lyrics},
                     {"unknown_genre", data.stats.unknown_genre}}},
        {"date_range", {{"first", data.date_range.first ? data.date_range.first->to_string() : ""},
                        {"last", data.date_range.last ? data.date_range.last->to_string() : ""}}}};
    write_json(c.output_dir / "prepare_stats.json", stats);
    return data;
}

std::vector<ingest::SongRecord> load_or_prepare(const ExperimentConfig& c) {
    const auto path = c.output_dir / "cleaned.csv";
    if (fs::exists(path)) {
        std::ifstream in(path, std::ios::binary);
        return ingest::read_cleaned_csv(in);
    }
    if (c.input.empty()) throw ConfigError("no cleaned dataset in '" + c.output_dir.string() + "' and no --input given");
    return cmd_prepare(c).songs;
}

// ---------------------------------------------------------------- topics

namespace {

textprep::StopwordSet stopwords_for(const ExperimentConfig& c) {
    return c.stopwords.empty() ? textprep::load_stopwords() : textprep::load_stopwords(c.stopwords);
}

lda::LdaConfig lda_config(const ExperimentConfig& c, int topics, std::uint64_t seed) {
    lda::LdaConfig l;
    l.topics = topics;
    l.alpha = c.lda_alpha;
    l.beta = c.lda_beta;
    l.iterations = c.lda_iterations;
    l.seed = seed;
    return l;
}

bool model_matches(const lda::TopicModel& m, const lda::LdaConfig& l, std::size_t documents) {
    return m.topics == l.topics && m.alpha == l.resolved_alpha() && m.beta == l.beta &&
           m.iterations == l.iterations && m.seed == l.seed && m.documents == documents;
}

void persist_topics(const ExperimentConfig& c, const std::vector<ingest::SongRecord>& songs, const TopicFeatures& t) {
    write_json(c.output_dir / "title_topics.json", lda::to_json(t.title));
    write_json(c.output_dir / "lyrics_topics.json", lda::to_json(t.lyrics));
    write_text(c.output_dir / "topics.md", "# Topic models\n\n" + lda::top_words_report(t.title, "Song title topics") +
                                               "\n" + lda::top_words_report(t.lyrics, "Lyrics topics"));
    std::ostringstream assignments;
    csv::write_record(assignments, {"title", "artist", "title_topic", "lyrics_topic"});
    for (std::size_t i = 0; i < songs.size(); ++i) {
        csv::write_record(assignments, {songs[i].title, songs[i].artist, std::to_string(t.title_topics[i]),
                                        std::to_string(t.lyrics_topics[i])});
    }
    write_text(c.output_dir / "topic_assignments.csv", assignments.str());
}

}  // namespace

TopicFeatures fit_topics(const std::vector<ingest::SongRecord>& songs, const ExperimentConfig& c) {
    const auto stop = stopwords_for(c);
    std::vector<std::string> titles, lyrics;
    for (const auto& s : songs) {
        titles.push_back(s.title);
        lyrics.push_back(s.lyrics);
    }
    const auto title_docs = textprep::tokenize_corpus(titles, stop);
    const auto lyric_docs = textprep::tokenize_corpus(lyrics, stop);
    const auto seeds = derive_seeds(c.seed);

    TopicFeatures t;
    auto fit_title = [&] { return lda::fit_lda(title_docs, lda_config(c, c.title_topics, seeds.lda_title)); };
    auto fit_lyrics = [&] { return lda::fit_lda(lyric_docs, lda_config(c, c.lyrics_topics, seeds.lda_lyrics)); };
    if (resolve_workers(c.workers) > 1) {
        auto title_future = std::async(std::launch::async, fit_title);
        t.lyrics = fit_lyrics();
        t.title = title_future.get();
    } else {
        t.title = fit_title();
        t.lyrics = fit_lyrics();
    }
    t.title_topics = lda::assign_topics(t.title);
    t.lyrics_topics = lda::assign_topics(t.lyrics);
    return t;
}

TopicFeatures cmd_topics(const ExperimentConfig& c) {
    const auto songs = load_or_prepare(c);
    auto t = fit_topics(songs, c);
    persist_topics(c, songs, t);
    return t;
}

TopicFeatures load_or_fit_topics(const std::vector<ingest::SongRecord>& songs, const ExperimentConfig& c) {
    const auto seeds = derive_seeds(c.seed);
    auto title_json = read_json(c.output_dir / "title_topics.json");
    auto lyrics_json = read_json(c.output_dir / "lyrics_topics.json");
    if (title_json && lyrics_json) {
        TopicFeatures t;
        t.title = lda::topic_model_from_json(*title_json);
        t.lyrics = lda::topic_model_from_json(*lyrics_json);
        if (model_matches(t.title, lda_config(c, c.title_topics, seeds.lda_title), songs.size()) &&
            model_matches(t.lyrics, lda_config(c, c.lyrics_topics, seeds.lda_lyrics), songs.size())) {
            t.title_topics = lda::assign_topics(t.title);
            t.lyrics_topics = lda::assign_topics(t.lyrics);
            return t;
        }
        log::info("persisted topic models do not match the configuration; refitting");
    }
    auto t = fit_topics(songs, c);
    persist_topics(c, songs, t);
    return t;
}

featureng::FeatureMatrix master_matrix(const std::vector<ingest::SongRecord>& songs, const TopicFeatures& topics) {
    auto m = featureng::assemble(songs, topics.title_topics, topics.lyrics_topics);
    std::vector<double> weeks;
    weeks.reserve(songs.size());
    for (const auto& s : songs) weeks.push_back(s.weeks_on_chart);
    return featureng::append_column(std::move(m), std::string(featureng::kWeeksOnChart), weeks);
}

// ---------------------------------------------------------------- cells

namespace {

struct PreparedSplit {
    featureng::FeatureMatrix train;     // normalized, not oversampled
    featureng::FeatureMatrix balanced;  // normalized and oversampled
    featureng::FeatureMatrix test;      // normalized with train parameters
    featureng::MinMaxParams minmax;
};

smote::SmoteConfig smote_config(const ExperimentConfig& c) {
    smote::SmoteConfig s;
    s.k_neighbors = c.smote_k;
    s.seed = derive_seeds(c.seed).smote;
    s.round_categorical = c.smote_round_categorical;
    return s;
}

PreparedSplit prepare_split(const featureng::FeatureMatrix& master, std::span<const std::string> columns,
                            const ExperimentConfig& c) {
    const auto data = featureng::select_columns(master, columns);
    const auto plan = evaluation::split(data.labels, c.train_ratio, c.stratified, derive_seeds(c.seed).split);
    PreparedSplit s;
    const auto raw_train = featureng::select_rows(data, plan.train);
    s.minmax = featureng::fit_minmax(raw_train);
    s.train = featureng::apply_minmax(s.minmax, raw_train);
    s.test = featureng::apply_minmax(s.minmax, featureng::select_rows(data, plan.test));
    s.balanced = smote::smote_oversample(s.train, smote_config(c)).data;
    return s;
}

// Data and per-fold oversampling used for CV under the configured protocol.
std::pair<const featureng::FeatureMatrix*, std::optional<smote::SmoteConfig>> cv_protocol(const PreparedSplit& s,
                                                                                          const ExperimentConfig& c) {
    if (c.smote_before_cv) return {&s.balanced, std::nullopt};
    auto cfg = smote_config(c);
    cfg.seed = derive_seed(cfg.seed, "cv");
    return {&s.train, cfg};
}

featsel::SelectionOptions selection_options(const ExperimentConfig& c, const std::optional<smote::SmoteConfig>& fold_smote) {
    featsel::SelectionOptions o;
    o.folds = c.cv_folds;
    o.stratified = c.stratified;
    o.fold_seed = derive_seeds(c.seed).folds;
    o.objective = c.selection_objective;
    o.epsilon = c.selection_epsilon;
    o.per_fold_smote = fold_smote;
    o.workers = c.workers;
    return o;
}

}  // namespace

CellResult run_cell(const featureng::FeatureMatrix& master, ModelKind model, FeatureSet fset, const ExperimentConfig& c) {
    CellResult r;
    r.model = model;
    r.feature_set = fset;
    try {
        const auto columns = feature_set_columns(fset);
        const auto split = prepare_split(master, columns, c);
        r.minmax = split.minmax;
        r.train_rows = split.balanced.rows();
        r.train_hits = static_cast<std::size_t>(std::count(split.balanced.labels.begin(), split.balanced.labels.end(), 1));
        r.test_rows = split.test.rows();

        const auto spec = model_spec(c, model);
        const auto [cv_data, fold_smote] = cv_protocol(split, c);

        r.columns = columns;
        if (c.selection) {
            r.selection = featsel::forward_select(spec, *cv_data, columns, selection_options(c, fold_smote));
            if (r.selection->selected.empty()) {
                log::warn(cell_name(model, fset) + ": selection accepted no feature; using the full set");
            } else {
                r.columns = r.selection->selected;
            }
        }

        const auto cv_subset = featureng::select_columns(*cv_data, r.columns);
        const auto folds = evaluation::kfold(cv_subset.labels, c.cv_folds, c.stratified, derive_seeds(c.seed).folds);
        const auto per_fold = evaluation::cross_validate(spec, cv_subset, folds, fold_smote);

        const auto model_fit = classifiers::fit(spec, featureng::select_columns(split.balanced, r.columns));
        const auto test = featureng::select_columns(split.test, r.columns);
        r.report = evaluation::evaluate_scores(model_fit->score_all(test), test.labels);
        r.report.per_fold = per_fold;
        r.model_json = model_fit->to_json();
    } catch (const std::exception& e) {
        r.error = e.what();
        log::error(cell_name(model, fset) + " failed: " + r.error);
    }
    return r;
}

// ---------------------------------------------------------------- reports

std::string cell_name(ModelKind m, FeatureSet f) {
    return std::string(classifiers::to_string(m)) + "_" + std::string(to_string(f));
}

nlohmann::json to_json(const CellResult& r) {
    nlohmann::json j;
    j["model"] = classifiers::to_string(r.model);
    j["feature_set"] = to_string(r.feature_set);
    j["columns"] = r.columns;
    j["train_rows"] = r.train_rows;
    j["train_hits"] = r.train_hits;
    j["test_rows"] = r.test_rows;
    if (!r.error.empty()) {
        j["error"] = r.error;
        return j;
    }
    j["report"] = evaluation::to_json(r.report);
    j["selection"] = r.selection ? featsel::to_json(*r.selection) : nlohmann::json(nullptr);
    return j;
}

namespace {

std::string row_label(const CellResult& r) {
    return upper(classifiers::to_string(r.model)) + " (" + std::string(display_name(r.feature_set)) + ")";
}

}  // namespace

std::string ablation_markdown(const std::vector<CellResult>& cells) {
    std::ostringstream out;
    out << "| Model | 5-fold CV Accuracy | 5-fold CV AUC | Model Test Accuracy | Model Test AUC | Features |\n";
    out << "|---|---|---|---|---|---|\n";
    for (const auto& r : cells) {
        out << "| " << row_label(r) << " | ";
        if (!r.error.empty()) {
            out << "error | error | error | error | - |\n";
            continue;
        }
        out << fmt("%.2f%%", 100 * r.report.cv_accuracy()) << " | " << fmt("%.3f", r.report.cv_auc()) << " | "
            << fmt("%.2f%%", 100 * r.report.accuracy) << " | " << fmt("%.3f", r.report.auc) << " | "
            << r.columns.size() << " |\n";
    }
    return out.str();
}

std::string ablation_csv(const std::vector<CellResult>& cells) {
    std::ostringstream out;
    csv::write_record(out, {"model", "feature_set", "cv_accuracy", "cv_auc", "test_accuracy", "test_auc", "tp", "fp",
                            "tn", "fn", "n_features", "error"});
    for (const auto& r : cells) {
        auto num = [](double v) { return std::isfinite(v) ? csv::format_double(v) : std::string{}; };
        if (!r.error.empty()) {
            csv::write_record(out, {std::string(classifiers::to_string(r.model)), std::string(to_string(r.feature_set)),
                                    "", "", "", "", "", "", "", "", "", r.error});
            continue;
        }
        const auto& cm = r.report.confusion;
        csv::write_record(out, {std::string(classifiers::to_string(r.model)), std::string(to_string(r.feature_set)),
                                num(r.report.cv_accuracy()), num(r.report.cv_auc()), num(r.report.accuracy),
                                num(r.report.auc), std::to_string(cm.tp), std::to_string(cm.fp), std::to_string(cm.tn),
                                std::to_string(cm.fn), std::to_string(r.columns.size()), ""});
    }
    return out.str();
}

// ---------------------------------------------------------------- commands

std::vector<CellResult> cmd_ablate(const ExperimentConfig& c) {
    c.validate();
    const auto songs = load_or_prepare(c);
    const auto topics = load_or_fit_topics(songs, c);
    const auto master = master_matrix(songs, topics);

    std::vector<std::pair<ModelKind, FeatureSet>> grid;
    for (auto m : c.models) {
        for (auto f : c.feature_sets) grid.emplace_back(m, f);
    }
    std::vector<CellResult> cells(grid.size());
    parallel_for(grid.size(), c.workers, [&](std::size_t i) {
        log::info("cell " + cell_name(grid[i].first, grid[i].second));
        cells[i] = run_cell(master, grid[i].first, grid[i].second, c);
    });

    for (const auto& r : cells) {
        const auto name = cell_name(r.model, r.feature_set);
        write_json(c.output_dir / "cells" / (name + ".json"), to_json(r));
        if (r.error.empty()) {
            std::ostringstream roc;
            evaluation::write_roc_csv(roc, r.report.roc_points);
            write_text(c.output_dir / "roc" / (name + ".csv"), roc.str());
        }
    }
    write_text(c.output_dir / "ablation.md", ablation_markdown(cells));
    write_text(c.output_dir / "ablation.csv", ablation_csv(cells));
    return cells;
}

std::vector<featsel::SelectionTrace> cmd_select(const ExperimentConfig& c) {
    c.validate();
    const auto songs = load_or_prepare(c);
    const auto topics = load_or_fit_topics(songs, c);
    const auto master = master_matrix(songs, topics);
    const FeatureSet fset = c.feature_sets.size() == 1 ? c.feature_sets.front() : FeatureSet::all;
    const auto columns = feature_set_columns(fset);
    const auto split = prepare_split(master, columns, c);
    const auto [cv_data, fold_smote] = cv_protocol(split, c);

    std::vector<featsel::SelectionTrace> traces;
    for (auto m : c.models) {
        traces.push_back(featsel::forward_select(model_spec(c, m), *cv_data, columns, selection_options(c, fold_smote)));
        write_json(c.output_dir / "selection" / (std::string(classifiers::to_string(m)) + ".json"),
                   featsel::to_json(traces.back()));
    }
    write_text(c.output_dir / "selection.md", "# Forward feature selection (" + std::string(display_name(fset)) +
                                                  ")\n\n" + featsel::selection_markdown(traces));
    return traces;
}

CellResult cmd_evaluate(const ExperimentConfig& c) {
    c.validate();
    const auto songs = load_or_prepare(c);
    const auto topics = load_or_fit_topics(songs, c);
    const auto master = master_matrix(songs, topics);
    auto r = run_cell(master, c.models.front(), c.feature_sets.front(), c);
    const auto name = cell_name(r.model, r.feature_set);
    write_json(c.output_dir / "cells" / (name + ".json"), to_json(r));
    if (r.error.empty()) {
        std::ostringstream roc;
        evaluation::write_roc_csv(roc, r.report.roc_points);
        write_text(c.output_dir / "roc" / (name + ".csv"), roc.str());
        write_json(c.output_dir / "models" / (name + ".json"), r.model_json);
        write_json(c.output_dir / "models" / (name + ".minmax.json"), featureng::to_json(r.minmax));
    }
    return r;
}

// ---------------------------------------------------------------- manifest

nlohmann::json dataset_fingerprint(const std::vector<ingest::SongRecord>& songs) {
    std::ostringstream text;
    ingest::write_cleaned_csv(text, songs);
    std::size_t hits = 0;
    for (const auto& s : songs) hits += static_cast<std::size_t>(ingest::label(s));
    return {{"rows", songs.size()},
            {"hits", hits},
            {"non_hits", songs.size() - hits},
            {"checksum_fnv1a64", hex64(fnv1a64(text.str()))}};
}

void write_manifest(const ExperimentConfig& c, const std::vector<ingest::SongRecord>& songs,
                    const CommandTiming& timing) {
    const auto path = c.output_dir / "manifest.json";
    nlohmann::json m = read_json(path).value_or(nlohmann::json::object());
    const auto seeds = derive_seeds(c.seed);
    m["config"] = to_json(c);
    m["seeds"] = {{"run", seeds.run},
                  {"split", seeds.split},
                  {"folds", seeds.folds},
                  {"smote", seeds.smote},
                  {"lda_title", seeds.lda_title},
                  {"lda_lyrics", seeds.lda_lyrics}};
    for (auto k : classifiers::kAllModels) {
        m["seeds"]["model_" + std::string(classifiers::to_string(k))] = seeds.model(k);
    }
    m["dataset"] = dataset_fingerprint(songs);
    m["versions"] = {{"hitpred", kVersion},
                     {"compiler", __VERSION__},
                     {"prng", "mt19937_64 + splitmix64 seed derivation"},
                     {"stopwords_fnv1a64", hex64(fnv1a64(textprep::builtin_stopword_text()))}};
    m["timing"][timing.command] = timing.seconds;
    write_json(path, m);
}

}  // namespace hitpred::experiment
