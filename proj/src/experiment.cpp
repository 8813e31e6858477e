#include "trendcast/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::evaluation {

namespace {

std::vector<double> targets_for(const features::FeatureTable& table, models::TargetKind target) {
    return target == models::TargetKind::kPop ? table.targets_pop() : table.targets_pct();
}

/// Predicted percent change for the direction check: the prediction itself for the pct target,
/// the change implied against pop_lag0 for the pop target.
MetricsReport score(const features::FeatureTable& table, std::span<const std::size_t> rows,
                    std::span<const double> predictions, models::TargetKind target) {
    std::vector<double> y, pct_true, pct_pred;
    const auto lag0 = table.schema.index_of("pop_lag0");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& row = table.rows[rows[k]];
        y.push_back(target == models::TargetKind::kPop ? row.target_pop : row.target_pct);
        if (features::is_missing(row.target_pct)) continue;
        const double implied = target == models::TargetKind::kPct
                                   ? predictions[k]
                                   : (lag0 ? features::pct_change(predictions[k], row.values[*lag0]) : features::kMissing);
        if (features::is_missing(implied)) continue;
        pct_true.push_back(row.target_pct);
        pct_pred.push_back(implied);
    }
    MetricsReport m = regression_metrics(y, predictions);
    if (!pct_true.empty()) {
        const auto t = binary_trend_accuracy(pct_true, pct_pred);
        m.binary_accuracy = t.accuracy;
        m.majority_baseline_accuracy = t.majority_baseline;
    }
    return m;
}

std::string opt(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

}  // namespace

std::string model_label(const ExperimentConfig& config, const features::FeatureSchema& schema) {
    std::string label = models::to_string(config.model);
    if (config.model == models::ModelKind::kGbdt && schema.embedding_dim > 0) label += "+embed";
    return label;
}

features::FeatureTable evaluable_rows(const features::FeatureTable& table, models::TargetKind target) {
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const double y = target == models::TargetKind::kPop ? r.target_pop : r.target_pct;
        if (!features::is_missing(y)) keep.push_back(i);
    }
    auto out = table.subset(keep);
    out.excluded_topics = table.excluded_topics;
    return out;
}

ExperimentResult run_experiment(const features::FeatureTable& input, const ExperimentConfig& config) {
    const auto table = evaluable_rows(input, config.target);
    const auto y = targets_for(table, config.target);
    const auto plan = config.split == SplitKind::kTemporal ? temporal_splits(table, config.n_splits)
                                                           : topic_splits(table, config.n_splits, config.seed);

    auto fit_options = config.fit;
    fit_options.gbdt.seed = config.seed;

    std::vector<std::vector<double>> fold_predictions(plan.folds.size());
    std::vector<std::exception_ptr> errors(plan.folds.size());
    auto run_fold = [&](std::size_t f) {
        try {
            const auto& fold = plan.folds[f];
            const auto train = table.subset(fold.train);
            const auto test = table.subset(fold.test);
            std::vector<double> ytr;
            for (auto i : fold.train) ytr.push_back(y[i]);
            const auto model = models::fit_model(config.model, config.target, train, ytr, fit_options);
            fold_predictions[f] = models::predict(model, test);
        } catch (...) {
            errors[f] = std::current_exception();
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(config.workers, static_cast<unsigned>(plan.folds.size())));
    if (workers == 1) {
        for (std::size_t f = 0; f < plan.folds.size(); ++f) run_fold(f);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t f = w; f < plan.folds.size(); f += workers) run_fold(f);
            });
        }
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ExperimentResult result;
    result.config = config;
    result.model_label = model_label(config, table.schema);
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& test = plan.folds[f].test;
        result.folds.push_back({f, score(table, test, fold_predictions[f], config.target)});
        result.test_rows.insert(result.test_rows.end(), test.begin(), test.end());
        result.predictions.insert(result.predictions.end(), fold_predictions[f].begin(), fold_predictions[f].end());
    }
    result.pooled = score(table, result.test_rows, result.predictions, config.target);
    return result;
}

ExperimentResult run_experiment(const corpus::CorpusStore& store, const ExperimentConfig& config) {
    features::FeatureOptions opts;
    opts.horizon = config.horizon;
    opts.embeddings = config.embeddings;
    opts.first_base_year = config.first_base_year;
    opts.last_base_year = config.last_base_year;
    return run_experiment(features::build_feature_rows(store, opts), config);
}

void write_report_csv_header(std::ostream& out) {
    out << "model,target,split,fold,r2,mae,medae,rmse,binary_acc,baseline_acc,n\n";
}

void write_report_csv(const ExperimentResult& result, std::ostream& out, bool pooled_only) {
    auto line = [&](const std::string& fold, const MetricsReport& m) {
        out << result.model_label << ',' << models::to_string(result.config.target) << ','
            << to_string(result.config.split) << ',' << fold << ',' << opt(m.r2) << ',' << csv::format_double(m.mae)
            << ',' << csv::format_double(m.medae) << ',' << csv::format_double(m.rmse) << ','
            << opt(m.binary_accuracy) << ',' << opt(m.majority_baseline_accuracy) << ',' << m.n << '\n';
    };
    if (!pooled_only) {
        for (const auto& f : result.folds) line(std::to_string(f.fold), f.metrics);
    }
    line("pooled", result.pooled);
}

std::string format_report_text(const std::vector<ExperimentResult>& results) {
    std::ostringstream out;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-8s %-14s %-9s %8s %10s %10s %10s %8s %8s %7s\n", "target", "model", "split",
                  "R2", "MAE", "MedAE", "RMSE", "bin_acc", "base_acc", "n");
    out << buf;
    for (const auto& r : results) {
        const auto& m = r.pooled;
        auto fmt = [](const std::optional<double>& v, const char* spec) {
            char b[32];
            if (!v) return std::string("n/a");
            std::snprintf(b, sizeof b, spec, *v);
            return std::string(b);
        };
        std::snprintf(buf, sizeof buf, "%-8s %-14s %-9s %8s %10.2f %10.2f %10.2f %8s %8s %7zu\n",
                      models::to_string(r.config.target).c_str(), r.model_label.c_str(),
                      to_string(r.config.split).c_str(), fmt(m.r2, "%.3f").c_str(), m.mae, m.medae, m.rmse,
                      fmt(m.binary_accuracy, "%.3f").c_str(), fmt(m.majority_baseline_accuracy, "%.3f").c_str(), m.n);
        out << buf;
    }
    return out.str();
}

}  // namespace trendcast::evaluation
