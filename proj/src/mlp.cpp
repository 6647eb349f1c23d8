#include "hitpred/mlp.hpp"

#include "hitpred/error.hpp"
#include "hitpred/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace hitpred::classifiers {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMatrix>;
using MatrixMap = Eigen::Map<RowMatrix>;
using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;
using VectorMap = Eigen::Map<Eigen::VectorXd>;

double sigmoid(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::fabs(t))); }

struct LayerView {
    std::size_t weight_offset;
    std::size_t bias_offset;
    std::size_t in;
    std::size_t out;
};

std::vector<LayerView> layout(const std::vector<std::size_t>& widths) {
    std::vector<LayerView> layers;
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const std::size_t in = widths[l], out = widths[l + 1];
        layers.push_back({offset, offset + in * out, in, out});
        offset += in * out + out;
    }
    return layers;
}

// Forward pass over a batch; returns activations per layer (index 0 = input)
// and the pre-activation of the output layer.
std::vector<RowMatrix> forward_batch(const std::vector<LayerView>& layers, std::span<const double> params,
                                     const Matrix& X, Eigen::VectorXd& output_logit) {
    std::vector<RowMatrix> acts;
    acts.reserve(layers.size() + 1);
    acts.emplace_back(ConstMatrixMap(X.data().data(), static_cast<Eigen::Index>(X.rows()),
                                     static_cast<Eigen::Index>(X.cols())));
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& L = layers[l];
        ConstMatrixMap W(params.data() + L.weight_offset, static_cast<Eigen::Index>(L.out),
                         static_cast<Eigen::Index>(L.in));
        ConstVectorMap b(params.data() + L.bias_offset, static_cast<Eigen::Index>(L.out));
        RowMatrix z = acts.back() * W.transpose();
        z.rowwise() += b.transpose();
        if (l + 1 == layers.size()) output_logit = z.col(0);
        acts.emplace_back(z.unaryExpr([](double v) { return sigmoid(v); }));
    }
    return acts;
}

}  // namespace

MlpNetwork::MlpNetwork(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
    if (widths_.size() < 2 || widths_.back() != 1) throw ParameterError("MLP needs >= 2 layers ending in 1 unit");
    for (auto w : widths_) {
        if (w < 1) throw ParameterError("MLP layer widths must be >= 1");
    }
    std::size_t count = 0;
    for (std::size_t l = 0; l + 1 < widths_.size(); ++l) count += widths_[l] * widths_[l + 1] + widths_[l + 1];
    params_.assign(count, 0.0);
}

void MlpNetwork::initialize(std::uint64_t seed) {
    Rng rng(seed);
    for (auto& p : params_) p = rng.uniform() - 0.5;
}

double MlpNetwork::forward(std::span<const double> x) const {
    std::vector<double> a(x.begin(), x.end()), next;
    for (const auto& L : layout(widths_)) {
        next.assign(L.out, 0.0);
        for (std::size_t o = 0; o < L.out; ++o) {
            double s = params_[L.bias_offset + o];
            const double* w = &params_[L.weight_offset + o * L.in];
            for (std::size_t i = 0; i < L.in; ++i) s += w[i] * a[i];
            next[o] = sigmoid(s);
        }
        a.swap(next);
    }
    return a[0];
}

double MlpNetwork::loss(const Matrix& X, std::span<const int> y) const {
    Eigen::VectorXd logit;
    forward_batch(layout(widths_), params_, X, logit);
    double s = 0;
    for (Eigen::Index i = 0; i < logit.size(); ++i) s += softplus(logit[i]) - y[static_cast<std::size_t>(i)] * logit[i];
    return s / static_cast<double>(X.rows());
}

double MlpNetwork::loss_and_gradient(const Matrix& X, std::span<const int> y, std::vector<double>& grad) const {
    const auto layers = layout(widths_);
    Eigen::VectorXd logit;
    auto acts = forward_batch(layers, params_, X, logit);
    const double n = static_cast<double>(X.rows());

    double loss = 0;
    RowMatrix delta(acts.back().rows(), 1);
    for (Eigen::Index i = 0; i < logit.size(); ++i) {
        const int yi = y[static_cast<std::size_t>(i)];
        loss += softplus(logit[i]) - yi * logit[i];
        // d(mean BCE)/d(logit) = (p - y) / n.
        delta(i, 0) = (acts.back()(i, 0) - yi) / n;
    }
    loss /= n;

    grad.assign(params_.size(), 0.0);
    for (std::size_t l = layers.size(); l-- > 0;) {
        const auto& L = layers[l];
        MatrixMap gW(grad.data() + L.weight_offset, static_cast<Eigen::Index>(L.out), static_cast<Eigen::Index>(L.in));
        VectorMap gb(grad.data() + L.bias_offset, static_cast<Eigen::Index>(L.out));
        gW = delta.transpose() * acts[l];
        gb = delta.colwise().sum().transpose();
        if (l == 0) break;
        ConstMatrixMap W(params_.data() + L.weight_offset, static_cast<Eigen::Index>(L.out),
                         static_cast<Eigen::Index>(L.in));
        RowMatrix back = delta * W;
        const RowMatrix& a = acts[l];
        delta = back.cwiseProduct(a.cwiseProduct((1.0 - a.array()).matrix()));
    }
    return loss;
}

MlpTrainingInfo train_mlp(MlpNetwork& net, const Matrix& X, std::span<const int> y, const MlpParams& params) {
    MlpTrainingInfo info;
    std::vector<double> grad;
    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < params.max_iter; ++iter) {
        const double loss = net.loss_and_gradient(X, y, grad);
        if (!std::isfinite(loss)) {
            std::ostringstream msg;
            msg << "MLP training diverged at iteration " << iter << " (loss " << loss
                << ", learning rate " << params.learning_rate << ")";
            throw RunError(msg.str());
        }
        info.final_loss = loss;
        if (previous - loss < params.min_improvement) break;
        previous = loss;
        auto p = net.parameters();
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= params.learning_rate * grad[i];
        info.iterations = iter + 1;
    }
    return info;
}

MlpClassifier::MlpClassifier(const featureng::FeatureMatrix& train, const MlpParams& params, std::uint64_t seed)
    : Classifier(train.column_names) {
    if (params.hidden_layers < 1 || params.neurons < 1) throw ParameterError("MLP layer sizes must be >= 1");
    if (params.max_iter < 1) throw ParameterError("MLP needs max_iter >= 1");
    if (!(params.learning_rate > 0)) throw ParameterError("MLP learning rate must be positive");
    if (train.rows() == 0) throw DataError("MLP needs a non-empty training set");
    std::vector<std::size_t> widths{train.cols()};
    for (int l = 0; l < params.hidden_layers; ++l) widths.push_back(static_cast<std::size_t>(params.neurons));
    widths.push_back(1);
    net_ = MlpNetwork(std::move(widths));
    net_.initialize(seed);
    info_ = train_mlp(net_, train.values, train.labels, params);
}

MlpClassifier::MlpClassifier(std::vector<std::string> columns, const nlohmann::json& state)
    : Classifier(std::move(columns)) {
    net_ = MlpNetwork(state.at("widths").get<std::vector<std::size_t>>());
    const auto p = state.at("parameters").get<std::vector<double>>();
    if (p.size() != net_.parameter_count()) throw DataError("MLP state parameter count mismatch");
    std::copy(p.begin(), p.end(), net_.parameters().begin());
    info_.iterations = state.value("iterations", 0);
    info_.final_loss = state.value("final_loss", 0.0);
}

double MlpClassifier::score_row(std::span<const double> x) const { return net_.forward(x); }

nlohmann::json MlpClassifier::state_json() const {
    return {{"widths", net_.widths()},
            {"parameters", std::vector<double>(net_.parameters().begin(), net_.parameters().end())},
            {"iterations", info_.iterations},
            {"final_loss", info_.final_loss}};
}

}  // namespace hitpred::classifiers
