#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trendcast/features.hpp"
#include "trendcast/model.hpp"

namespace trendcast::evaluation {

enum class ErrorMetric { kMse, kMae, kOneMinusR2 };

struct FeatureImportance {
    std::string feature;
    double degradation = 0.0;  // mean error increase over repeats
};

struct ImportanceReport {
    double reference_error = 0.0;
    std::vector<FeatureImportance> features;  // model input order
    double embedding_total = 0.0;             // sum over embed_* components

    /// Features plus an aggregated "embedding" entry (when present), by degradation descending.
    std::vector<FeatureImportance> ranked() const;
};

double error_of(ErrorMetric metric, std::span<const double> y_true, std::span<const double> y_pred);

/// Seeded column shuffles. The "topic" entry of a topic-encoded GBDT shuffles topic ids.
ImportanceReport permutation_importance(const models::Model& model, const features::FeatureTable& rows,
                                        std::span<const double> targets, ErrorMetric metric = ErrorMetric::kMse,
                                        int repeats = 5, std::uint64_t seed = 42);

/// feature,degradation in ranked order.
void write_importance_csv(const ImportanceReport& report, std::ostream& out);

}  // namespace trendcast::evaluation
