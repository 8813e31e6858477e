#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"
#include "trendcast/features.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/model.hpp"
#include "trendcast/splits.hpp"

namespace trendcast::evaluation {

struct ExperimentConfig {
    models::ModelKind model = models::ModelKind::kGbdt;
    models::TargetKind target = models::TargetKind::kPop;
    SplitKind split = SplitKind::kTemporal;
    bool embeddings = true;
    int horizon = features::kDefaultHorizon;
    std::size_t n_splits = kDefaultSplits;
    std::uint64_t seed = 42;
    int first_base_year = corpus::kModernEraStart;
    int last_base_year = 2019;
    models::FitOptions fit;
    /// Worker threads for independent folds; results do not depend on it.
    unsigned workers = 1;
};

struct FoldReport {
    std::size_t fold = 0;
    MetricsReport metrics;
};

struct ExperimentResult {
    std::string model_label;  // e.g. "gbdt" or "gbdt+embed"
    ExperimentConfig config;
    std::vector<FoldReport> folds;
    MetricsReport pooled;
    /// Pooled test rows (indices into the evaluated table) and their predictions, in fold order.
    std::vector<std::size_t> test_rows;
    std::vector<double> predictions;
};

/// Label used in reports: the model kind, with "+embed" for embedding-augmented boosting.
std::string model_label(const ExperimentConfig& config, const features::FeatureSchema& schema);

/// Rows with an undefined target for the configured kind are dropped before splitting.
features::FeatureTable evaluable_rows(const features::FeatureTable& table, models::TargetKind target);

/// Fits per fold, predicts held-out rows and reports per-fold and pooled metrics.
ExperimentResult run_experiment(const features::FeatureTable& table, const ExperimentConfig& config);
ExperimentResult run_experiment(const corpus::CorpusStore& store, const ExperimentConfig& config);

void write_report_csv_header(std::ostream& out);
/// model,target,split,fold,r2,mae,medae,rmse,binary_acc,baseline_acc,n (one row per fold plus "pooled").
void write_report_csv(const ExperimentResult& result, std::ostream& out, bool pooled_only = false);
/// Aligned-column rendering of the pooled rows.
std::string format_report_text(const std::vector<ExperimentResult>& results);

}  // namespace trendcast::evaluation
