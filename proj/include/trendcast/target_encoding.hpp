#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace trendcast::models {

/// Smoothed per-topic target means used at inference time.
struct TargetEncoding {
    std::map<std::string, double> table;
    double prior_mean = 0.0;  // mean of all training targets; used for unseen topics
    double smoothing = 1.0;

    double encode(const std::string& topic_id) const;
};

struct OrderedEncoding {
    std::vector<double> encoded;  // aligned with the input rows
    TargetEncoding encoding;
};

/// Ordered target encoding. Rows are visited by (base_year, topic_id); each row sees only
/// targets of strictly earlier rows, blended with the running global mean by `smoothing`.
OrderedEncoding target_encode(std::span<const std::string> topics, std::span<const int> base_years,
                              std::span<const double> targets, double smoothing = 1.0);

}  // namespace trendcast::models
