#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trendcast/features.hpp"

namespace trendcast::evaluation {

enum class SplitKind { kTemporal, kTopic };

std::string to_string(SplitKind kind);
SplitKind parse_split_kind(const std::string& text);

/// Row indices into the table the plan was built from.
struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

struct SplitPlan {
    SplitKind kind = SplitKind::kTemporal;
    std::size_t n_splits = 0;
    std::vector<Fold> folds;
};

inline constexpr std::size_t kDefaultSplits = 30;

/// Expanding-window walk-forward plan over distinct base years. Test blocks hold
/// floor(years / (n + 1)) years each; the initial training block absorbs the remainder.
SplitPlan temporal_splits(std::span<const int> base_years, std::size_t n_splits = kDefaultSplits);
SplitPlan temporal_splits(const features::FeatureTable& table, std::size_t n_splits = kDefaultSplits);

/// Topics sorted, shuffled with the seed, then dealt round-robin into folds.
SplitPlan topic_splits(std::span<const std::string> topics, std::size_t n_folds = kDefaultSplits,
                       std::uint64_t seed = 42);
SplitPlan topic_splits(const features::FeatureTable& table, std::size_t n_folds = kDefaultSplits,
                       std::uint64_t seed = 42);

}  // namespace trendcast::evaluation
