#include "hitpred/lda.hpp"

#include "hitpred/error.hpp"
#include "hitpred/rng.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hitpred::lda {

std::size_t Vocabulary::add(const std::string& word) {
    auto [it, inserted] = index_.try_emplace(word, words_.size());
    if (inserted) words_.push_back(word);
    return it->second;
}

std::optional<std::size_t> Vocabulary::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(std::span<const textprep::TokenDoc> docs) {
    Vocabulary vocab;
    for (const auto& d : docs) {
        for (const auto& t : d.tokens) vocab.add(t);
    }
    if (vocab.size() == 0) throw DataError("corpus has no tokens; cannot fit a topic model");
    return vocab;
}

std::size_t TopicModel::total_tokens() const {
    return std::accumulate(doc_lengths.begin(), doc_lengths.end(), std::size_t{0});
}

std::vector<std::pair<std::string, int>> TopicModel::top_words(std::size_t k, std::size_t n) const {
    std::vector<std::size_t> order(vocabulary.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return topic_word(k, a) > topic_word(k, b); });
    std::vector<std::pair<std::string, int>> out;
    for (std::size_t i = 0; i < order.size() && out.size() < n; ++i) {
        int c = topic_word(k, order[i]);
        if (c == 0) break;
        out.emplace_back(vocabulary.word(order[i]), c);
    }
    return out;
}

std::vector<double> compute_theta(const TopicModel& m) {
    const std::size_t K = static_cast<std::size_t>(m.topics);
    std::vector<double> theta(m.documents * K);
    for (std::size_t d = 0; d < m.documents; ++d) {
        const double denom = m.doc_lengths[d] + K * m.alpha;
        for (std::size_t k = 0; k < K; ++k) {
            theta[d * K + k] = (m.doc_topic_counts[d * K + k] + m.alpha) / denom;
        }
    }
    return theta;
}

TopicModel fit_lda(std::span<const textprep::TokenDoc> docs, const LdaConfig& config,
                   const SweepObserver& observer) {
    if (config.topics < 2) throw ParameterError("LDA needs at least 2 topics");
    if (config.iterations < 1) throw ParameterError("LDA needs at least 1 iteration");
    const double alpha = config.resolved_alpha();
    if (!(alpha > 0) || !(config.beta > 0)) throw ParameterError("LDA priors must be positive");

    TopicModel m;
    m.topics = config.topics;
    m.alpha = alpha;
    m.beta = config.beta;
    m.seed = config.seed;
    m.iterations = config.iterations;
    m.vocabulary = build_vocabulary(docs);
    m.documents = docs.size();

    const std::size_t K = static_cast<std::size_t>(config.topics);
    const std::size_t V = m.vocabulary.size();
    m.topic_word_counts.assign(K * V, 0);
    m.doc_topic_counts.assign(m.documents * K, 0);
    m.topic_totals.assign(K, 0);
    m.doc_lengths.assign(m.documents, 0);

    // Flattened token stream with per-document offsets.
    std::vector<std::size_t> offsets(m.documents + 1, 0);
    std::vector<std::size_t> words;
    for (std::size_t d = 0; d < m.documents; ++d) {
        for (const auto& t : docs[d].tokens) words.push_back(*m.vocabulary.find(t));
        offsets[d + 1] = words.size();
        m.doc_lengths[d] = static_cast<int>(docs[d].tokens.size());
    }
    std::vector<std::size_t> z(words.size());

    Rng rng(config.seed);
    for (std::size_t d = 0; d < m.documents; ++d) {
        for (std::size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
            const std::size_t k = rng.index(K);
            z[i] = k;
            ++m.doc_topic_counts[d * K + k];
            ++m.topic_word_counts[k * V + words[i]];
            ++m.topic_totals[k];
        }
    }

    const double v_beta = static_cast<double>(V) * m.beta;
    std::vector<double> cumulative(K);
    for (int sweep = 0; sweep < config.iterations; ++sweep) {
        for (std::size_t d = 0; d < m.documents; ++d) {
            int* nd = &m.doc_topic_counts[d * K];
            for (std::size_t i = offsets[d]; i < offsets[d + 1]; ++i) {
                const std::size_t w = words[i];
                std::size_t k = z[i];
                --nd[k];
                --m.topic_word_counts[k * V + w];
                --m.topic_totals[k];

                double total = 0;
                for (std::size_t t = 0; t < K; ++t) {
                    total += (nd[t] + m.alpha) * (m.topic_word_counts[t * V + w] + m.beta) /
                             (m.topic_totals[t] + v_beta);
                    cumulative[t] = total;
                }
                const double u = rng.uniform() * total;
                k = K - 1;
                for (std::size_t t = 0; t < K; ++t) {
                    if (u < cumulative[t]) {
                        k = t;
                        break;
                    }
                }

                z[i] = k;
                ++nd[k];
                ++m.topic_word_counts[k * V + w];
                ++m.topic_totals[k];
            }
        }
        if (observer) observer(sweep, m);
    }

    m.theta = compute_theta(m);
    return m;
}

std::span<const double> doc_topic(const TopicModel& model, std::size_t d) {
    if (d >= model.documents) {
        throw std::out_of_range("document index " + std::to_string(d) + " out of range (" +
                                std::to_string(model.documents) + " documents)");
    }
    const std::size_t K = static_cast<std::size_t>(model.topics);
    return std::span<const double>(model.theta).subspan(d * K, K);
}

int assign_topic(std::span<const double> theta_row) {
    if (theta_row.empty()) throw ParameterError("cannot assign a topic from an empty distribution");
    std::size_t best = 0;
    for (std::size_t k = 1; k < theta_row.size(); ++k) {
        if (theta_row[k] > theta_row[best]) best = k;
    }
    return static_cast<int>(best);
}

std::vector<int> assign_topics(const TopicModel& model) {
    std::vector<int> out(model.documents);
    for (std::size_t d = 0; d < model.documents; ++d) out[d] = assign_topic(doc_topic(model, d));
    return out;
}

nlohmann::json to_json(const TopicModel& m) {
    nlohmann::json j;
    j["topics"] = m.topics;
    j["alpha"] = m.alpha;
    j["beta"] = m.beta;
    j["seed"] = m.seed;
    j["iterations"] = m.iterations;
    j["documents"] = m.documents;
    j["vocabulary"] = m.vocabulary.words();
    j["topic_word_counts"] = m.topic_word_counts;
    j["doc_topic_counts"] = m.doc_topic_counts;
    return j;
}

TopicModel topic_model_from_json(const nlohmann::json& j) {
    try {
        TopicModel m;
        m.topics = j.at("topics").get<int>();
        m.alpha = j.at("alpha").get<double>();
        m.beta = j.at("beta").get<double>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.iterations = j.at("iterations").get<int>();
        m.documents = j.at("documents").get<std::size_t>();
        for (const auto& w : j.at("vocabulary")) m.vocabulary.add(w.get<std::string>());
        m.topic_word_counts = j.at("topic_word_counts").get<std::vector<int>>();
        m.doc_topic_counts = j.at("doc_topic_counts").get<std::vector<int>>();

        const std::size_t K = static_cast<std::size_t>(m.topics);
        const std::size_t V = m.vocabulary.size();
        if (m.topic_word_counts.size() != K * V || m.doc_topic_counts.size() != m.documents * K) {
            throw DataError("topic model count matrices have inconsistent shapes");
        }
        m.topic_totals.assign(K, 0);
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t w = 0; w < V; ++w) m.topic_totals[k] += m.topic_word_counts[k * V + w];
        }
        m.doc_lengths.assign(m.documents, 0);
        for (std::size_t d = 0; d < m.documents; ++d) {
            for (std::size_t k = 0; k < K; ++k) m.doc_lengths[d] += m.doc_topic_counts[d * K + k];
        }
        m.theta = compute_theta(m);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed topic model JSON: ") + e.what());
    }
}

std::string top_words_report(const TopicModel& model, std::string_view title, std::size_t n) {
    std::ostringstream out;
    out << "## " << title << " (K=" << model.topics << ")\n\n";
    out << "| Topic | Top words |\n|---|---|\n";
    for (std::size_t k = 0; k < static_cast<std::size_t>(model.topics); ++k) {
        out << "| " << k << " | ";
        auto words = model.top_words(k, n);
        for (std::size_t i = 0; i < words.size(); ++i) {
            if (i) out << ", ";
            out << words[i].first;
        }
        out << " |\n";
    }
    return out.str();
}

}  // namespace hitpred::lda
