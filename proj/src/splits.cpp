#include "trendcast/splits.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "trendcast/error.hpp"

namespace trendcast::evaluation {

std::string to_string(SplitKind kind) { return kind == SplitKind::kTemporal ? "temporal" : "topic"; }

SplitKind parse_split_kind(const std::string& text) {
    if (text == "temporal") return SplitKind::kTemporal;
    if (text == "topic") return SplitKind::kTopic;
    throw ValidationError("unknown split kind '" + text + "' (expected temporal or topic)");
}

SplitPlan temporal_splits(std::span<const int> base_years, std::size_t n_splits) {
    if (n_splits < 1) throw ValidationError("n_splits must be at least 1");
    const std::set<int> distinct(base_years.begin(), base_years.end());
    const std::vector<int> years(distinct.begin(), distinct.end());
    if (years.size() < n_splits + 1) {
        throw ValidationError("temporal splits need at least " + std::to_string(n_splits + 1) +
                              " distinct base years, found " + std::to_string(years.size()));
    }
    const std::size_t block = years.size() / (n_splits + 1);
    const std::size_t initial = years.size() - n_splits * block;

    SplitPlan plan;
    plan.kind = SplitKind::kTemporal;
    plan.n_splits = n_splits;
    for (std::size_t f = 0; f < n_splits; ++f) {
        const int test_lo = years[initial + f * block];
        const int test_hi = years[initial + (f + 1) * block - 1];
        Fold fold;
        for (std::size_t i = 0; i < base_years.size(); ++i) {
            if (base_years[i] < test_lo) {
                fold.train.push_back(i);
            } else if (base_years[i] <= test_hi) {
                fold.test.push_back(i);
            }
        }
        plan.folds.push_back(std::move(fold));
    }
    return plan;
}

SplitPlan temporal_splits(const features::FeatureTable& table, std::size_t n_splits) {
    std::vector<int> years;
    years.reserve(table.rows.size());
    for (const auto& r : table.rows) years.push_back(r.base_year);
    return temporal_splits(years, n_splits);
}

SplitPlan topic_splits(std::span<const std::string> topics, std::size_t n_folds, std::uint64_t seed) {
    if (n_folds < 1) throw ValidationError("n_folds must be at least 1");
    const std::set<std::string> distinct(topics.begin(), topics.end());
    if (distinct.size() < n_folds) {
        throw ValidationError("topic splits need at least " + std::to_string(n_folds) + " distinct topics, found " +
                              std::to_string(distinct.size()));
    }
    std::vector<std::string> order(distinct.begin(), distinct.end());
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::map<std::string, std::size_t> fold_of;
    for (std::size_t i = 0; i < order.size(); ++i) fold_of[order[i]] = i % n_folds;

    SplitPlan plan;
    plan.kind = SplitKind::kTopic;
    plan.n_splits = n_folds;
    plan.folds.resize(n_folds);
    for (std::size_t i = 0; i < topics.size(); ++i) {
        const std::size_t f = fold_of.at(topics[i]);
        for (std::size_t k = 0; k < n_folds; ++k) (k == f ? plan.folds[k].test : plan.folds[k].train).push_back(i);
    }
    return plan;
}

SplitPlan topic_splits(const features::FeatureTable& table, std::size_t n_folds, std::uint64_t seed) {
    std::vector<std::string> topics;
    topics.reserve(table.rows.size());
    for (const auto& r : table.rows) topics.push_back(r.topic_id);
    return topic_splits(topics, n_folds, seed);
}

}  // namespace trendcast::evaluation
