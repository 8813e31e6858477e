#include "trendcast/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "trendcast/error.hpp"

namespace trendcast::evaluation {

MetricsReport regression_metrics(std::span<const double> y_true, std::span<const double> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size()) {
        throw ValidationError("metrics need equal-length, non-empty vectors");
    }
    const std::size_t n = y_true.size();
    double mean = 0.0;
    for (double y : y_true) {
        if (!std::isfinite(y)) throw ValidationError("metrics: non-finite y_true");
        mean += y;
    }
    mean /= static_cast<double>(n);

    std::vector<double> abs_err(n);
    double sse = 0.0, sst = 0.0, sae = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y_pred[i])) throw ValidationError("metrics: non-finite y_pred");
        const double e = y_true[i] - y_pred[i];
        abs_err[i] = std::abs(e);
        sse += e * e;
        sae += abs_err[i];
        sst += (y_true[i] - mean) * (y_true[i] - mean);
    }

    MetricsReport m;
    m.n = n;
    m.mae = sae / static_cast<double>(n);
    m.rmse = std::sqrt(sse / static_cast<double>(n));
    if (sst > 0.0) m.r2 = 1.0 - sse / sst;

    std::sort(abs_err.begin(), abs_err.end());
    m.medae = n % 2 ? abs_err[n / 2] : (abs_err[n / 2 - 1] + abs_err[n / 2]) / 2.0;
    return m;
}

TrendAccuracy binary_trend_accuracy(std::span<const double> pct_true, std::span<const double> pct_pred) {
    if (pct_true.size() != pct_pred.size()) throw ValidationError("trend accuracy: length mismatch");
    if (pct_true.empty()) throw ValidationError("trend accuracy: no rows with a defined percent change");
    std::size_t match = 0, up = 0;
    for (std::size_t i = 0; i < pct_true.size(); ++i) {
        const bool true_up = pct_true[i] > 0.0;
        const bool pred_up = pct_pred[i] > 0.0;
        match += true_up == pred_up;
        up += true_up;
    }
    const double n = static_cast<double>(pct_true.size());
    TrendAccuracy t;
    t.n = pct_true.size();
    t.accuracy = static_cast<double>(match) / n;
    t.majority_baseline = std::max(static_cast<double>(up), n - static_cast<double>(up)) / n;
    return t;
}

}  // namespace trendcast::evaluation
