#pragma once

#include <span>
#include <string>
#include <vector>

#include "trendcast/features.hpp"
#include "trendcast/matrix.hpp"

namespace trendcast::models {

enum class FillPolicy { kColumnMean, kZero };

/// Per-column imputation value, mean and population standard deviation.
/// A zero std marks a constant column, which standardizes to all zeros.
struct Standardization {
    std::vector<double> fill;
    std::vector<double> mean;
    std::vector<double> stddev;

    double apply(std::size_t col, double value) const;
    Matrix apply(const Matrix& x) const;
};

/// Throws ValidationError on an empty matrix.
Standardization fit_standardization(const Matrix& x, FillPolicy policy = FillPolicy::kColumnMean);

struct StandardizedTable {
    Standardization stats;
    Matrix values;
};
StandardizedTable standardize_fit_apply(const Matrix& x, FillPolicy policy = FillPolicy::kColumnMean);

struct RidgeSolution {
    std::vector<double> weights;
    double intercept = 0.0;
};

/// Minimizes ||y - b - Zw||^2 + alpha ||w||^2 over standardized Z; the intercept is unpenalized.
RidgeSolution solve_ridge(const Matrix& z, std::span<const double> y, double alpha);

/// The penalized objective minimized by solve_ridge.
double ridge_objective(const Matrix& z, std::span<const double> y, const RidgeSolution& s, double alpha);

struct RidgeModel {
    features::FeatureSchema schema;       // schema of the table the model was fitted on
    std::vector<std::string> features;    // columns actually used, in weight order
    Standardization standardization;
    std::vector<double> weights;
    double intercept = 0.0;
    double alpha = 1.0;
    bool baseline = false;
    std::vector<double> cv_mse;  // per alpha in grid order

    double predict_row(std::span<const double> used_values) const;
};

inline const std::vector<double>& default_alpha_grid() {
    static const std::vector<double> grid = {0.1, 1.0, 10.0};
    return grid;
}

/// K-fold search over alpha (row i in fold i % k), then a refit on every row.
RidgeModel fit_ridge_cv(const features::FeatureTable& table, std::span<const double> targets,
                        std::span<const double> alpha_grid = default_alpha_grid(), int k_folds = 5);

/// Same as fit_ridge_cv restricted to the given columns.
RidgeModel fit_ridge_cv(const features::FeatureTable& table, const std::vector<std::string>& columns,
                        std::span<const double> targets, std::span<const double> alpha_grid, int k_folds,
                        FillPolicy policy);

std::vector<double> predict(const RidgeModel& model, const features::FeatureTable& table);

}  // namespace trendcast::models
