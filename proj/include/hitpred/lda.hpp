#pragma once

// Latent Dirichlet Allocation fitted by collapsed Gibbs sampling.

#include "hitpred/textprep.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hitpred::lda {

class Vocabulary {
public:
    // Returns the index of `word`, inserting it if new.
    std::size_t add(const std::string& word);
    std::optional<std::size_t> find(std::string_view word) const;
    const std::string& word(std::size_t index) const { return words_.at(index); }
    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> words_;
};

// Indices are assigned in order of first occurrence. Throws DataError if
// every document is empty.
Vocabulary build_vocabulary(std::span<const textprep::TokenDoc> docs);

struct LdaConfig {
    int topics = 10;
    // Symmetric document-topic prior; nullopt means 50 / topics.
    std::optional<double> alpha;
    double beta = 0.01;
    int iterations = 1000;
    std::uint64_t seed = 0;

    double resolved_alpha() const { return alpha ? *alpha : 50.0 / topics; }
};

struct TopicModel {
    int topics = 0;
    double alpha = 0;
    double beta = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    Vocabulary vocabulary;
    std::size_t documents = 0;
    std::vector<int> topic_word_counts;  // topics x V, row-major
    std::vector<int> doc_topic_counts;   // documents x topics, row-major
    std::vector<int> topic_totals;       // per topic, sum over words
    std::vector<int> doc_lengths;
    std::vector<double> theta;           // documents x topics, row-major

    int topic_word(std::size_t k, std::size_t w) const {
        return topic_word_counts[k * vocabulary.size() + w];
    }
    int doc_topic_count(std::size_t d, std::size_t k) const {
        return doc_topic_counts[d * static_cast<std::size_t>(topics) + k];
    }
    std::size_t total_tokens() const;

    // Words of topic k ordered by descending count (index breaks ties),
    // at most n entries and never any with a zero count.
    std::vector<std::pair<std::string, int>> top_words(std::size_t k, std::size_t n) const;
};

// theta[d][k] = (n_dk + alpha) / (n_d + K alpha).
std::vector<double> compute_theta(const TopicModel& model);

// Called after every Gibbs sweep with the current counts; theta is not yet
// populated at that point.
using SweepObserver = std::function<void(int sweep, const TopicModel&)>;

// Throws ParameterError when topics < 2, iterations < 1, alpha <= 0 or
// beta <= 0; DataError when every document is empty.
TopicModel fit_lda(std::span<const textprep::TokenDoc> docs, const LdaConfig& config,
                   const SweepObserver& observer = {});

// Theta row of document d. Throws std::out_of_range when d >= documents.
std::span<const double> doc_topic(const TopicModel& model, std::size_t d);

// Argmax with ties going to the lowest index. Throws ParameterError on empty input.
int assign_topic(std::span<const double> theta_row);

// Argmax topic of every document.
std::vector<int> assign_topics(const TopicModel& model);

nlohmann::json to_json(const TopicModel& model);
TopicModel topic_model_from_json(const nlohmann::json& j);

// Markdown listing of the top words per topic.
std::string top_words_report(const TopicModel& model, std::string_view title, std::size_t n = 10);

}  // namespace hitpred::lda
