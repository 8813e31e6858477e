#include "trendcast/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::synthetic {

namespace {

std::string topic_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "topic %03zu", i);
    return buf;
}

std::int64_t medline_total(int year) {
    return static_cast<std::int64_t>(std::llround(274000.0 + (774000.0 - 274000.0) * (year - 1979) / 42.0));
}

}  // namespace

SyntheticCorpus leading_indicator_corpus(const LeadingIndicatorOptions& o) {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SyntheticCorpus out;
    const int last_year = o.first_year + o.n_years - 1;
    for (int y = o.first_year; y <= last_year; ++y) {
        out.data.globals.push_back({y, medline_total(y), 0.40 - 0.003 * (y - o.first_year),
                                    50000 + 3000 * static_cast<std::int64_t>(y - o.first_year)});
    }
    if (o.embedding_dim > 0) out.data.embeddings = corpus::EmbeddingTable{o.embedding_dim, {}};

    for (std::size_t i = 0; i < o.n_topics; ++i) {
        TopicTruth truth;
        truth.topic_id = topic_name(i);
        const double base = std::exp(std::log(150.0) + 0.7 * normal(rng));
        const bool wave = unit(rng) < o.wave_probability;
        const bool decline = unit(rng) < o.decline_probability;
        const int wave_year = o.first_year + 3 + static_cast<int>(unit(rng) * (o.n_years - 10));
        const int decline_year = o.first_year + 10 + static_cast<int>(unit(rng) * (o.n_years - 14));
        const double peak_patents = 50.0 + 350.0 * unit(rng);
        if (wave) truth.patent_wave_year = wave_year;
        if (decline) truth.decline_year = decline_year;

        std::vector<double> patents(static_cast<std::size_t>(o.n_years));
        for (int k = 0; k < o.n_years; ++k) {
            const int y = o.first_year + k;
            double p = wave ? peak_patents / (1.0 + std::exp(-(y - wave_year) / 1.5)) * (1.0 + 0.1 * normal(rng))
                            : 3.0 + 2.0 * normal(rng);
            patents[static_cast<std::size_t>(k)] = std::max(0.0, std::round(p));
            out.data.patents.push_back({truth.topic_id, y, static_cast<std::int64_t>(patents[static_cast<std::size_t>(k)])});
        }
        const double patent_scale = wave ? peak_patents : 400.0;

        double pop = 0.0;
        for (int k = 0; k < o.n_years; ++k) {
            const int y = o.first_year + k;
            const double lagged_patents = k >= 2 ? patents[static_cast<std::size_t>(k - 2)] : 0.0;
            double equilibrium = base * (1.0 + o.patent_effect * lagged_patents / patent_scale);
            if (decline && y >= decline_year) equilibrium *= o.decline_floor;
            if (k == 0) {
                pop = equilibrium;
            } else {
                pop = (1.0 - o.persistence) * equilibrium + o.persistence * pop + o.noise * pop * normal(rng);
            }
            pop = std::max(pop, 1.0);

            double review_share = 0.08 + 0.02 * normal(rng);
            if (decline && y >= decline_year - 3 && y <= decline_year + 1) review_share = 0.30 + 0.03 * normal(rng);
            review_share = std::clamp(review_share, 0.0, 1.0);

            const auto total = medline_total(y);
            const auto pubs = std::max<std::int64_t>(1, std::llround(pop * static_cast<double>(total) / corpus::kPopularityScale));
            const auto reviews = std::min(pubs, static_cast<std::int64_t>(std::llround(review_share * static_cast<double>(pubs))));
            out.data.counts.push_back({truth.topic_id, y, pubs, reviews, 0});
        }

        if (o.embedding_dim > 0) {
            std::vector<double> v(o.embedding_dim);
            for (std::size_t d = 0; d < o.embedding_dim; ++d) v[d] = 0.5 * normal(rng);
            v[0] += decline ? 1.0 : -1.0;
            if (o.embedding_dim > 1) v[1] += wave ? 1.0 : -1.0;
            out.data.embeddings->vectors[truth.topic_id] = std::move(v);
        }
        out.truth.push_back(std::move(truth));
    }
    return out;
}

corpus::CorpusData persistent_corpus(std::size_t n_topics, int first_year, int n_years, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> level(20, 5000);
    corpus::CorpusData data;
    for (int y = first_year; y < first_year + n_years; ++y) data.globals.push_back({y, 100000, 0.3, 10000});
    for (std::size_t i = 0; i < n_topics; ++i) {
        const auto count = level(rng);
        for (int y = first_year; y < first_year + n_years; ++y) {
            data.counts.push_back({topic_name(i), y, count, count / 10, 0});
        }
    }
    return data;
}


}  // namespace trendcast::synthetic
