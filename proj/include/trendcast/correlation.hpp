#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"

namespace trendcast::evaluation {

using YearValues = std::map<int, double>;

struct Correlation {
    std::optional<double> r;  // undefined with < 3 overlapping points or zero variance
    std::size_t n_overlap = 0;
};

std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Pearson r over pairs (a(t), b(t - lag)); a positive lag means b leads a.
Correlation pearson_lagged(const YearValues& a, const YearValues& b, int lag);

enum class Indicator { kPopularity, kReviewPopularity, kResearchPopularity, kPublications, kPatents };

std::string to_string(Indicator indicator);
Indicator parse_indicator(const std::string& text);

/// Indicator values over the topic's observed years.
YearValues indicator_series(const corpus::CorpusStore& store, const corpus::TopicRecord& topic, Indicator indicator);

struct CorrelationProfile {
    std::string topic_id;
    Indicator target = Indicator::kPopularity;
    Indicator indicator = Indicator::kPatents;
    std::vector<int> lags;
    std::vector<Correlation> values;
};

CorrelationProfile correlation_profile(const corpus::CorpusStore& store, const corpus::TopicRecord& topic,
                                       Indicator target, Indicator indicator, std::span<const int> lags);

/// One r over all topics' (target(t), indicator(t - lag)) pairs with both years observed and
/// t inside [from_year, to_year].
Correlation pooled_correlation(const corpus::CorpusStore& store, Indicator target, Indicator indicator, int lag,
                               int from_year = corpus::kEarliestYear, int to_year = corpus::kLatestYear);

/// topic,indicator,lag,r,n_overlap
void write_profiles_csv(std::span<const CorrelationProfile> profiles, std::ostream& out);

}  // namespace trendcast::evaluation
