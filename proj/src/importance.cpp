#include "trendcast/importance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"
#include "trendcast/metrics.hpp"

namespace trendcast::evaluation {

double error_of(ErrorMetric metric, std::span<const double> y_true, std::span<const double> y_pred) {
    const auto m = regression_metrics(y_true, y_pred);
    switch (metric) {
        case ErrorMetric::kMse: return m.rmse * m.rmse;
        case ErrorMetric::kMae: return m.mae;
        case ErrorMetric::kOneMinusR2: return m.r2 ? 1.0 - *m.r2 : 0.0;
    }
    return 0.0;
}

std::vector<FeatureImportance> ImportanceReport::ranked() const {
    std::vector<FeatureImportance> out;
    bool has_embedding = false;
    for (const auto& f : features) {
        if (f.feature.rfind("embed_", 0) == 0) {
            has_embedding = true;
            continue;
        }
        out.push_back(f);
    }
    if (has_embedding) out.push_back({"embedding", embedding_total});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.degradation != b.degradation) return a.degradation > b.degradation;
        return a.feature < b.feature;
    });
    return out;
}

ImportanceReport permutation_importance(const models::Model& model, const features::FeatureTable& rows,
                                        std::span<const double> targets, ErrorMetric metric, int repeats,
                                        std::uint64_t seed) {
    if (repeats < 1) throw ValidationError("importance repeats must be positive");
    if (targets.size() != rows.rows.size()) throw ValidationError("importance: target count mismatch");

    ImportanceReport report;
    report.reference_error = error_of(metric, targets, models::predict(model, rows));

    std::vector<std::string> names = rows.schema.names;
    const auto* gbdt = std::get_if<models::GbdtModel>(&model);
    if (gbdt && gbdt->encode_topic) names.emplace_back(models::kTopicEncodingFeature);

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> perm(rows.rows.size());
    for (std::size_t f = 0; f < names.size(); ++f) {
        const bool topic_column = f == rows.schema.names.size();
        double total = 0.0;
        for (int rep = 0; rep < repeats; ++rep) {
            for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
            std::shuffle(perm.begin(), perm.end(), rng);
            features::FeatureTable shuffled = rows;
            for (std::size_t i = 0; i < perm.size(); ++i) {
                if (topic_column) {
                    shuffled.rows[i].topic_id = rows.rows[perm[i]].topic_id;
                } else {
                    shuffled.rows[i].values[f] = rows.rows[perm[i]].values[f];
                }
            }
            total += error_of(metric, targets, models::predict(model, shuffled)) - report.reference_error;
        }
        const double mean = total / repeats;
        report.features.push_back({names[f], mean});
        if (names[f].rfind("embed_", 0) == 0) report.embedding_total += mean;
    }
    return report;
}

void write_importance_csv(const ImportanceReport& report, std::ostream& out) {
    out << "feature,degradation\n";
    for (const auto& f : report.ranked()) out << csv::quote(f.feature) << ',' << csv::format_double(f.degradation) << '\n';
}

}  // namespace trendcast::evaluation
