#include "trendcast/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::evaluation {

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3) return std::nullopt;
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

Correlation pearson_lagged(const YearValues& a, const YearValues& b, int lag) {
    std::vector<double> x, y;
    for (const auto& [year, va] : a) {
        auto it = b.find(year - lag);
        if (it == b.end()) continue;
        x.push_back(va);
        y.push_back(it->second);
    }
    return {pearson(x, y), x.size()};
}

std::string to_string(Indicator indicator) {
    switch (indicator) {
        case Indicator::kPopularity: return "popularity";
        case Indicator::kReviewPopularity: return "review_popularity";
        case Indicator::kResearchPopularity: return "research_popularity";
        case Indicator::kPublications: return "publications";
        case Indicator::kPatents: return "patents";
    }
    return "?";
}

Indicator parse_indicator(const std::string& text) {
    for (auto i : {Indicator::kPopularity, Indicator::kReviewPopularity, Indicator::kResearchPopularity,
                   Indicator::kPublications, Indicator::kPatents}) {
        if (to_string(i) == text) return i;
    }
    throw ValidationError("unknown indicator '" + text + "'");
}

YearValues indicator_series(const corpus::CorpusStore& store, const corpus::TopicRecord& topic, Indicator indicator) {
    YearValues out;
    for (const auto& [year, pt] : topic.popularity) {
        switch (indicator) {
            case Indicator::kPopularity: out[year] = pt.popularity; break;
            case Indicator::kReviewPopularity: out[year] = pt.review_popularity; break;
            case Indicator::kResearchPopularity: out[year] = pt.research_popularity; break;
            case Indicator::kPublications:
                out[year] = static_cast<double>(topic.counts.at(year).publications);
                break;
            case Indicator::kPatents: out[year] = static_cast<double>(store.patents_at(topic, year)); break;
        }
    }
    return out;
}

CorrelationProfile correlation_profile(const corpus::CorpusStore& store, const corpus::TopicRecord& topic,
                                       Indicator target, Indicator indicator, std::span<const int> lags) {
    CorrelationProfile p;
    p.topic_id = topic.meta.topic_id;
    p.target = target;
    p.indicator = indicator;
    const auto a = indicator_series(store, topic, target);
    const auto b = indicator_series(store, topic, indicator);
    for (int lag : lags) {
        p.lags.push_back(lag);
        p.values.push_back(pearson_lagged(a, b, lag));
    }
    return p;
}

Correlation pooled_correlation(const corpus::CorpusStore& store, Indicator target, Indicator indicator, int lag,
                               int from_year, int to_year) {
    std::vector<double> x, y;
    for (const auto& [id, topic] : store.topics()) {
        const auto a = indicator_series(store, topic, target);
        const auto b = indicator_series(store, topic, indicator);
        for (const auto& [year, va] : a) {
            if (year < from_year || year > to_year) continue;
            auto it = b.find(year - lag);
            if (it == b.end()) continue;
            x.push_back(va);
            y.push_back(it->second);
        }
    }
    return {pearson(x, y), x.size()};
}

void write_profiles_csv(std::span<const CorrelationProfile> profiles, std::ostream& out) {
    out << "topic,indicator,lag,r,n_overlap\n";
    for (const auto& p : profiles) {
        for (std::size_t i = 0; i < p.lags.size(); ++i) {
            out << csv::quote(p.topic_id) << ',' << to_string(p.indicator) << ',' << p.lags[i] << ','
                << (p.values[i].r ? csv::format_double(*p.values[i].r) : std::string()) << ','
                << p.values[i].n_overlap << '\n';
        }
    }
}

}  // namespace trendcast::evaluation
