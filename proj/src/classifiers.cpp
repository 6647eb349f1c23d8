#include "hitpred/classifiers.hpp"

#include <cctype>

#include "hitpred/error.hpp"
#include "hitpred/knn.hpp"
#include "hitpred/logistic_regression.hpp"
#include "hitpred/mlp.hpp"
#include "hitpred/naive_bayes.hpp"
#include "hitpred/random_forest.hpp"

#include <cmath>

namespace hitpred::classifiers {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::knn: return "knn";
        case ModelKind::nb: return "nb";
        case ModelKind::rf: return "rf";
        case ModelKind::lr: return "lr";
        case ModelKind::mlp: return "mlp";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    std::string lower(name);
    for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    for (auto k : kAllModels) {
        if (to_string(k) == lower) return k;
    }
    throw ConfigError("unknown model '" + std::string(name) + "' (expected knn, nb, rf, lr or mlp)");
}

void ModelSpec::validate(std::size_t features) const {
    switch (kind) {
        case ModelKind::knn:
            if (knn.k < 1) throw ParameterError("kNN needs k >= 1");
            break;
        case ModelKind::nb:
            if (!(nb.default_probability > 0)) throw ParameterError("NB default probability must be positive");
            break;
        case ModelKind::rf:
            if (rf.n_trees < 1) throw ParameterError("random forest needs n_trees >= 1");
            if (rf.m_try < 0 || static_cast<std::size_t>(rf.m_try) > features) {
                throw ParameterError("random forest m_try must be in [1, d] (or 0 for floor(sqrt(d)))");
            }
            break;
        case ModelKind::lr:
            if (!(lr.resolved_lambda() >= 0)) throw ParameterError("L1 strength must be >= 0");
            if (lr.max_iter < 1) throw ParameterError("logistic regression needs max_iter >= 1");
            break;
        case ModelKind::mlp:
            if (mlp.hidden_layers < 1 || mlp.neurons < 1) throw ParameterError("MLP layer sizes must be >= 1");
            if (mlp.max_iter < 1) throw ParameterError("MLP needs max_iter >= 1");
            break;
    }
}

nlohmann::json to_json(const ModelSpec& s) {
    nlohmann::json j;
    j["kind"] = to_string(s.kind);
    j["seed"] = s.seed;
    j["knn"] = {{"k", s.knn.k}};
    j["nb"] = {{"default_probability", s.nb.default_probability}, {"variance_floor", s.nb.variance_floor}};
    j["rf"] = {{"n_trees", s.rf.n_trees},
               {"m_try", s.rf.m_try},
               {"bootstrap", s.rf.bootstrap},
               {"min_samples_split", s.rf.min_samples_split}};
    j["lr"] = {{"laplace_scale", s.lr.laplace_scale},
               {"lambda", s.lr.resolved_lambda()},
               {"max_iter", s.lr.max_iter},
               {"tol", s.lr.tol}};
    j["mlp"] = {{"hidden_layers", s.mlp.hidden_layers},
                {"neurons", s.mlp.neurons},
                {"max_iter", s.mlp.max_iter},
                {"learning_rate", s.mlp.learning_rate},
                {"min_improvement", s.mlp.min_improvement}};
    return j;
}

ModelSpec model_spec_from_json(const nlohmann::json& j) {
    ModelSpec s;
    s.kind = parse_model_kind(j.at("kind").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.knn.k = j.at("knn").at("k").get<int>();
    s.nb.default_probability = j.at("nb").at("default_probability").get<double>();
    s.nb.variance_floor = j.at("nb").at("variance_floor").get<double>();
    s.rf.n_trees = j.at("rf").at("n_trees").get<int>();
    s.rf.m_try = j.at("rf").at("m_try").get<int>();
    s.rf.bootstrap = j.at("rf").at("bootstrap").get<bool>();
    s.rf.min_samples_split = j.at("rf").at("min_samples_split").get<int>();
    s.lr.laplace_scale = j.at("lr").at("laplace_scale").get<double>();
    s.lr.lambda = j.at("lr").at("lambda").get<double>();
    s.lr.max_iter = j.at("lr").at("max_iter").get<int>();
    s.lr.tol = j.at("lr").at("tol").get<double>();
    s.mlp.hidden_layers = j.at("mlp").at("hidden_layers").get<int>();
    s.mlp.neurons = j.at("mlp").at("neurons").get<int>();
    s.mlp.max_iter = j.at("mlp").at("max_iter").get<int>();
    s.mlp.learning_rate = j.at("mlp").at("learning_rate").get<double>();
    s.mlp.min_improvement = j.at("mlp").at("min_improvement").get<double>();
    return s;
}

double Classifier::score(std::span<const double> x) const {
    if (x.size() != columns_.size()) {
        throw ConsistencyError("row has " + std::to_string(x.size()) + " features, model expects " +
                               std::to_string(columns_.size()));
    }
    return score_row(x);
}

std::vector<double> Classifier::score_all(const featureng::FeatureMatrix& m) const {
    if (m.column_names != columns_) {
        throw ConsistencyError("feature columns do not match the columns the model was trained on");
    }
    std::vector<double> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r] = score_row(m.values.row(r));
    return out;
}

std::vector<int> Classifier::predict_all(const featureng::FeatureMatrix& m) const {
    auto scores = score_all(m);
    std::vector<int> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) out[i] = threshold_score(scores[i]);
    return out;
}

nlohmann::json Classifier::to_json() const {
    return {{"kind", to_string(kind())}, {"columns", columns_}, {"state", state_json()}};
}

std::unique_ptr<Classifier> fit(const ModelSpec& spec, const featureng::FeatureMatrix& train) {
    spec.validate(train.cols());
    switch (spec.kind) {
        case ModelKind::knn: return std::make_unique<KnnClassifier>(train, spec.knn);
        case ModelKind::nb: return std::make_unique<NaiveBayesClassifier>(train, spec.nb);
        case ModelKind::rf: return std::make_unique<RandomForestClassifier>(train, spec.rf, spec.seed);
        case ModelKind::lr: return std::make_unique<LogisticRegressionClassifier>(train, spec.lr);
        case ModelKind::mlp: return std::make_unique<MlpClassifier>(train, spec.mlp, spec.seed);
    }
    throw ParameterError("unknown model kind");
}

std::unique_ptr<Classifier> classifier_from_json(const nlohmann::json& j) {
    try {
        const auto kind = parse_model_kind(j.at("kind").get<std::string>());
        auto columns = j.at("columns").get<std::vector<std::string>>();
        const auto& state = j.at("state");
        switch (kind) {
            case ModelKind::knn: return std::make_unique<KnnClassifier>(std::move(columns), state);
            case ModelKind::nb: return std::make_unique<NaiveBayesClassifier>(std::move(columns), state);
            case ModelKind::rf: return std::make_unique<RandomForestClassifier>(std::move(columns), state);
            case ModelKind::lr: return std::make_unique<LogisticRegressionClassifier>(std::move(columns), state);
            case ModelKind::mlp: return std::make_unique<MlpClassifier>(std::move(columns), state);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model JSON: ") + e.what());
    }
    throw DataError("unknown model kind in JSON");
}

}  // namespace hitpred::classifiers
