#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"

namespace trendcast::features {

/// Missing feature values and undefined targets are carried as quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

inline constexpr int kMinHorizon = 1;
inline constexpr int kMaxHorizon = 6;
inline constexpr int kDefaultHorizon = 5;

/// 100 * (current - past) / past, or kMissing when past is zero.
double pct_change(double current, double past);

struct FeatureSchema {
    std::vector<std::string> names;
    std::size_t embedding_dim = 0;

    std::optional<std::size_t> index_of(const std::string& name) const;
    bool operator==(const FeatureSchema&) const = default;
};

/// Names of the time-dependent and lifecycle features, in schema order, without embeddings.
const std::vector<std::string>& base_feature_names();
FeatureSchema make_schema(std::size_t embedding_dim);

struct FeatureRow {
    std::string topic_id;
    int base_year = 0;
    int horizon = kDefaultHorizon;
    std::vector<double> values;
    double target_pop = kMissing;
    double target_pct = kMissing;
};

struct FeatureTable {
    FeatureSchema schema;
    std::vector<FeatureRow> rows;
    /// Topics skipped because they never reach a training start year.
    std::vector<std::string> excluded_topics;

    std::size_t size() const { return rows.size(); }
    FeatureTable subset(std::span<const std::size_t> indices) const;
    std::vector<double> targets_pop() const;
    std::vector<double> targets_pct() const;
};

struct FeatureOptions {
    int horizon = kDefaultHorizon;
    bool embeddings = true;
    int first_base_year = corpus::kModernEraStart;
    std::optional<int> last_base_year;
};

/// Feature vector for one topic at base year t, using only corpus data from years <= t.
/// Targets are filled when year t + horizon lies within the topic's observed span.
FeatureRow build_feature_row(const corpus::CorpusStore& store, const corpus::TopicRecord& topic, int base_year,
                             int horizon, std::size_t embedding_dim);

/// Rows sorted by topic_id then base_year. Throws ValidationError for a horizon outside [1, 6].
FeatureTable build_feature_rows(const corpus::CorpusStore& store, const FeatureOptions& options);

/// Schema the builder would use for the store and options.
FeatureSchema schema_for(const corpus::CorpusStore& store, bool embeddings);

/// topic,base_year,horizon,<schema...>,target_pop,target_pct; missing values are empty fields.
void write_features_csv(const FeatureTable& table, std::ostream& out);
FeatureTable read_features_csv(const std::string& path);

}  // namespace trendcast::features
