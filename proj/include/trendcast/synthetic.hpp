#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"

namespace trendcast::synthetic {

/// Generator for the leading-indicator benchmark corpus.
///
/// Each topic's popularity follows an AR(1) process pulled toward an equilibrium level.
/// The equilibrium rises in proportion to the topic's patent count two years earlier, and
/// some topics suffer an engineered decline: their equilibrium drops sharply at a chosen
/// year and the review share of their publications rises three years beforehand.
struct LeadingIndicatorOptions {
    std::size_t n_topics = 50;
    int first_year = 1975;
    int n_years = 45;
    std::uint64_t seed = 42;
    double persistence = 0.7;       // AR(1) coefficient
    double patent_effect = 2.0;     // equilibrium multiplier at full patent activity
    double decline_floor = 0.35;    // equilibrium fraction after a decline
    double noise = 0.03;            // relative per-year innovation
    double wave_probability = 0.5;
    double decline_probability = 0.4;
    std::size_t embedding_dim = 0;  // > 0 adds embeddings loosely encoding each topic's regime
};

struct TopicTruth {
    std::string topic_id;
    std::optional<int> patent_wave_year;
    std::optional<int> decline_year;
};

struct SyntheticCorpus {
    corpus::CorpusData data;
    std::vector<TopicTruth> truth;
};

SyntheticCorpus leading_indicator_corpus(const LeadingIndicatorOptions& options = {});

/// Every topic holds a constant popularity; medline_total is fixed at 100000 so popularity equals the count.
corpus::CorpusData persistent_corpus(std::size_t n_topics, int first_year, int n_years, std::uint64_t seed = 42);


}  // namespace trendcast::synthetic
