// hitpred: command-line driver for the hit-song pipeline.

#include "hitpred/error.hpp"
#include "hitpred/experiment.hpp"
#include "hitpred/log.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

using namespace hitpred;
using experiment::ExperimentConfig;

namespace {

struct CliState {
    ExperimentConfig cfg;
    std::vector<std::string> models;
    std::vector<std::string> features;
    std::string objective = "accuracy";
    std::string log_level = "info";
    std::string manifest;
    double lda_alpha = 0;
    double lr_lambda = 0;
};

void add_common_options(CLI::App& app, CliState& s) {
    auto& c = s.cfg;
    app.add_option("-i,--input", c.input, "Raw weekly chart CSV");
    app.add_option("-o,--out", c.output_dir, "Output directory")->capture_default_str();
    app.add_option("--seed", c.seed, "Run seed")->capture_default_str();
    app.add_option("--model", s.models, "Models: knn nb rf lr mlp (repeatable)");
    app.add_option("--features", s.features, "Feature sets: AUDIO META_AUDIO NFE_AUDIO ALL (repeatable)");
    app.add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--stopwords", c.stopwords, "Stopword file, one word per line");
    app.add_option("--manifest", s.manifest, "Re-run with the configuration stored in a manifest.json");
    app.add_option("--log-level", s.log_level, "debug, info, warn, error or off")->capture_default_str();

    app.add_option("--title-topics", c.title_topics)->capture_default_str();
    app.add_option("--lyrics-topics", c.lyrics_topics)->capture_default_str();
    app.add_option("--lda-alpha", s.lda_alpha, "Dirichlet prior on document topics (default 50/K)");
    app.add_option("--lda-beta", c.lda_beta)->capture_default_str();
    app.add_option("--lda-iterations", c.lda_iterations)->capture_default_str();

    app.add_option("--train-ratio", c.train_ratio)->capture_default_str();
    app.add_option("--cv-folds", c.cv_folds)->capture_default_str();
    app.add_flag("--stratified,!--no-stratified", c.stratified)->capture_default_str();
    app.add_flag("--smote-before-cv", c.smote_before_cv, "Cross-validate on the oversampled training split");
    app.add_option("--smote-k", c.smote_k)->capture_default_str();
    app.add_flag("--smote-round-categorical", c.smote_round_categorical);

    app.add_flag("--selection", c.selection, "Forward feature selection inside ablation cells");
    app.add_option("--selection-objective", s.objective)->check(CLI::IsMember({"accuracy", "auc"}))->capture_default_str();
    app.add_option("--selection-epsilon", c.selection_epsilon)->capture_default_str();

    app.add_option("--knn-k", c.knn.k)->capture_default_str();
    app.add_option("--nb-default-probability", c.nb.default_probability)->capture_default_str();
    app.add_option("--rf-trees", c.rf.n_trees)->capture_default_str();
    app.add_option("--rf-mtry", c.rf.m_try, "0 means floor(sqrt(d))")->capture_default_str();
    app.add_option("--rf-threads", c.rf.threads)->capture_default_str();
    app.add_option("--lr-laplace-scale", c.lr.laplace_scale)->capture_default_str();
    app.add_option("--lr-lambda", s.lr_lambda, "L1 strength (overrides the Laplace scale)");
    app.add_option("--lr-max-iter", c.lr.max_iter)->capture_default_str();
    app.add_option("--mlp-hidden-layers", c.mlp.hidden_layers)->capture_default_str();
    app.add_option("--mlp-neurons", c.mlp.neurons)->capture_default_str();
    app.add_option("--mlp-max-iter", c.mlp.max_iter)->capture_default_str();
    app.add_option("--mlp-learning-rate", c.mlp.learning_rate)->capture_default_str();

    auto& m = c.columns;
    app.add_option("--col-title", m.title)->capture_default_str();
    app.add_option("--col-artist", m.artist)->capture_default_str();
    app.add_option("--col-date", m.week_date)->capture_default_str();
    app.add_option("--col-rank", m.rank)->capture_default_str();
    app.add_option("--col-genre", m.broad_genre)->capture_default_str();
    app.add_option("--col-lyrics", m.lyrics)->capture_default_str();
    for (std::size_t i = 0; i < m.audio.size(); ++i) {
        std::string flag = "--col-" + m.audio[i];
        for (auto& ch : flag) {
            if (ch == '_') ch = '-';
        }
        app.add_option(flag, m.audio[i])->capture_default_str();
    }
}

log::Level parse_level(const std::string& s) {
    static const std::map<std::string, log::Level> levels = {{"debug", log::Level::debug},
                                                             {"info", log::Level::info},
                                                             {"warn", log::Level::warn},
                                                             {"error", log::Level::error},
                                                             {"off", log::Level::off}};
    auto it = levels.find(s);
    if (it == levels.end()) throw ConfigError("unknown log level '" + s + "'");
    return it->second;
}

ExperimentConfig finalize(CliState& s, const CLI::App& app) {
    ExperimentConfig c = s.cfg;
    if (!s.manifest.empty()) {
        std::ifstream in(s.manifest);
        if (!in) throw ConfigError("cannot open manifest '" + s.manifest + "'");
        nlohmann::json m;
        try {
            m = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("cannot parse manifest: ") + e.what());
        }
        if (!m.contains("config")) throw ConfigError("manifest has no config section");
        const auto out = c.output_dir;
        c = experiment::config_from_json(m.at("config"));
        if (app.count("--out")) c.output_dir = out;
        return c;
    }
    if (!s.models.empty()) {
        c.models.clear();
        for (const auto& m : s.models) c.models.push_back(classifiers::parse_model_kind(m));
    }
    if (!s.features.empty()) {
        c.feature_sets.clear();
        for (const auto& f : s.features) c.feature_sets.push_back(experiment::parse_feature_set(f));
    }
    if (app.count("--lda-alpha")) c.lda_alpha = s.lda_alpha;
    if (app.count("--lr-lambda")) c.lr.lambda = s.lr_lambda;
    c.selection_objective = s.objective == "auc" ? featsel::Objective::auc : featsel::Objective::accuracy;
    return c;
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100 * v);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

int run(const std::string& command, CliState& s, const CLI::App& app) {
    log::set_level(parse_level(s.log_level));
    ExperimentConfig c = finalize(s, app);
    if (command == "evaluate") {
        if (s.models.empty() && s.manifest.empty()) c.models = {classifiers::ModelKind::rf};
        if (s.features.empty() && s.manifest.empty()) c.feature_sets = {experiment::FeatureSet::all};
    }
    c.validate();
    if (command == "prepare" && c.input.empty()) throw ConfigError("prepare needs --input");

    const auto start = std::chrono::steady_clock::now();
    int status = 0;
    if (command == "prepare") {
        const auto d = experiment::cmd_prepare(c);
        std::cout << "raw rows: " << d.raw_rows << " (malformed " << d.malformed_rows << ")\n"
                  << "unique songs: " << d.stats.input << "\n"
                  << "removed: " << d.stats.removed() << " (missing audio " << d.stats.missing_audio
                  << ", empty lyrics " << d.stats.empty_lyrics << ", unknown genre " << d.stats.unknown_genre << ")\n"
                  << "retained: " << d.songs.size() << " (hits " << d.hits() << ", non-hits "
                  << d.songs.size() - d.hits() << ")\n";
        if (d.date_range.first) {
            std::cout << "weeks: " << d.date_range.first->to_string() << " to " << d.date_range.last->to_string()
                      << "\n";
        }
    } else if (command == "topics") {
        const auto t = experiment::cmd_topics(c);
        std::cout << "title topics: " << t.title.topics << ", lyrics topics: " << t.lyrics.topics << "\n"
                  << "wrote " << (c.output_dir / "topics.md").string() << "\n";
    } else if (command == "ablate") {
        const auto cells = experiment::cmd_ablate(c);
        std::cout << experiment::ablation_markdown(cells);
        for (const auto& r : cells) {
            if (!r.error.empty()) status = 4;
        }
    } else if (command == "select") {
        const auto traces = experiment::cmd_select(c);
        std::cout << featsel::selection_markdown(traces);
    } else if (command == "evaluate") {
        const auto r = experiment::cmd_evaluate(c);
        if (!r.error.empty()) {
            std::cerr << "error: " << r.error << "\n";
            status = 4;
        } else {
            std::cout << experiment::cell_name(r.model, r.feature_set) << "\n"
                      << "cv accuracy: " << pct(r.report.cv_accuracy()) << "  cv auc: " << num(r.report.cv_auc())
                      << "\n"
                      << "test accuracy: " << pct(r.report.accuracy) << "  test auc: " << num(r.report.auc) << "\n";
        }
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    experiment::write_manifest(c, experiment::load_or_prepare(c), {command, seconds});
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Billboard hit-song prediction pipeline"};
    app.set_version_flag("--version", std::string(experiment::kVersion));
    app.set_config("--config", "", "INI/TOML file with option values (keys are long option names)");
    app.require_subcommand(1);

    CliState state;
    add_common_options(app, state);
    std::string command;
    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"prepare", "Clean and aggregate the weekly chart rows into one row per song"},
        {"topics", "Fit the title and lyrics topic models"},
        {"ablate", "Run the model x feature-set ablation"},
        {"select", "Forward feature selection for each model"},
        {"evaluate", "Fit and evaluate a single model on one feature set"}};
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->fallthrough();
        sub->callback([&command, n = name] { command = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        return run(command, state, app);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
