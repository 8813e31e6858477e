#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace trendcast::evaluation {

struct MetricsReport {
    std::optional<double> r2;  // undefined when y_true has zero variance
    double mae = 0.0;
    double medae = 0.0;
    double rmse = 0.0;
    std::optional<double> binary_accuracy;
    std::optional<double> majority_baseline_accuracy;
    std::size_t n = 0;
};

/// R², MAE, median absolute error (mean of the two middle values for even n) and RMSE.
MetricsReport regression_metrics(std::span<const double> y_true, std::span<const double> y_pred);

struct TrendAccuracy {
    double accuracy = 0.0;
    double majority_baseline = 0.0;
    std::size_t n = 0;
};

/// Direction is pct > 0; zero counts as "not up". Throws ValidationError on empty input.
TrendAccuracy binary_trend_accuracy(std::span<const double> pct_true, std::span<const double> pct_pred);

}  // namespace trendcast::evaluation
