#include "trendcast/ridge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "trendcast/error.hpp"

namespace trendcast::models {

double Standardization::apply(std::size_t col, double value) const {
    if (features::is_missing(value)) value = fill[col];
    if (stddev[col] == 0.0) return 0.0;
    return (value - mean[col]) / stddev[col];
}

Matrix Standardization::apply(const Matrix& x) const {
    Matrix out(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = apply(c, x(r, c));
    }
    return out;
}

Standardization fit_standardization(const Matrix& x, FillPolicy policy) {
    if (x.rows == 0) throw ValidationError("cannot standardize an empty table");
    Standardization s;
    s.fill.resize(x.cols);
    s.mean.resize(x.cols);
    s.stddev.resize(x.cols);
    for (std::size_t c = 0; c < x.cols; ++c) {
        double sum = 0.0;
        std::size_t present = 0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            if (!features::is_missing(x(r, c))) {
                sum += x(r, c);
                ++present;
            }
        }
        const double fill = policy == FillPolicy::kZero || present == 0 ? 0.0 : sum / present;
        double mean = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) mean += features::is_missing(x(r, c)) ? fill : x(r, c);
        mean /= static_cast<double>(x.rows);
        double var = 0.0;
        bool constant = true;
        const double first = features::is_missing(x(0, c)) ? fill : x(0, c);
        for (std::size_t r = 0; r < x.rows; ++r) {
            const double v = features::is_missing(x(r, c)) ? fill : x(r, c);
            constant = constant && v == first;
            var += (v - mean) * (v - mean);
        }
        s.fill[c] = fill;
        s.mean[c] = constant ? first : mean;
        s.stddev[c] = constant ? 0.0 : std::sqrt(var / static_cast<double>(x.rows));
    }
    return s;
}

StandardizedTable standardize_fit_apply(const Matrix& x, FillPolicy policy) {
    StandardizedTable out;
    out.stats = fit_standardization(x, policy);
    out.values = out.stats.apply(x);
    return out;
}

RidgeSolution solve_ridge(const Matrix& z, std::span<const double> y, double alpha) {
    if (!(alpha > 0.0)) throw ValidationError("ridge alpha must be positive");
    if (z.rows != y.size() || z.rows == 0) throw ValidationError("ridge: row count mismatch or empty input");
    const auto n = static_cast<Eigen::Index>(z.rows);
    const auto p = static_cast<Eigen::Index>(z.cols);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> zm(z.data.data(), n, p);
    Eigen::Map<const Eigen::VectorXd> ym(y.data(), n);

    // Columns are centred, so the unpenalized intercept decouples to the target mean.
    const double ybar = ym.mean();
    Eigen::VectorXd centred = ym.array() - ybar;
    Eigen::VectorXd col_means = zm.colwise().mean().transpose();
    Eigen::MatrixXd zc = zm.rowwise() - col_means.transpose();

    Eigen::MatrixXd gram = zc.transpose() * zc;
    gram.diagonal().array() += alpha;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw ValidationError("ridge system is singular");
    Eigen::VectorXd w = llt.solve(zc.transpose() * centred);
    if (!w.allFinite()) throw ValidationError("ridge system is singular");

    RidgeSolution s;
    s.weights.assign(w.data(), w.data() + w.size());
    s.intercept = ybar - col_means.dot(w);
    return s;
}

double ridge_objective(const Matrix& z, std::span<const double> y, const RidgeSolution& s, double alpha) {
    double loss = 0.0;
    for (std::size_t r = 0; r < z.rows; ++r) {
        double pred = s.intercept;
        for (std::size_t c = 0; c < z.cols; ++c) pred += s.weights[c] * z(r, c);
        loss += (y[r] - pred) * (y[r] - pred);
    }
    double penalty = 0.0;
    for (double w : s.weights) penalty += w * w;
    return loss + alpha * penalty;
}

double RidgeModel::predict_row(std::span<const double> used_values) const {
    double pred = intercept;
    for (std::size_t c = 0; c < weights.size(); ++c) pred += weights[c] * standardization.apply(c, used_values[c]);
    return pred;
}

namespace {

Matrix take_rows(const Matrix& x, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), x.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy_n(x.data.begin() + static_cast<std::ptrdiff_t>(rows[i] * x.cols), x.cols,
                    out.data.begin() + static_cast<std::ptrdiff_t>(i * x.cols));
    }
    return out;
}

}  // namespace

RidgeModel fit_ridge_cv(const features::FeatureTable& table, const std::vector<std::string>& columns,
                        std::span<const double> targets, std::span<const double> alpha_grid, int k_folds,
                        FillPolicy policy) {
    if (alpha_grid.empty()) throw ValidationError("alpha grid is empty");
    for (double a : alpha_grid) {
        if (!(a > 0.0)) throw ValidationError("alpha grid values must be positive");
    }
    if (k_folds < 2) throw ValidationError("ridge cross-validation needs at least 2 folds");
    if (targets.size() != table.rows.size()) throw ValidationError("target count does not match row count");
    for (double y : targets) {
        if (!std::isfinite(y)) throw ValidationError("ridge: non-finite target");
    }
    const std::size_t n = table.rows.size();
    const auto k = static_cast<std::size_t>(k_folds);
    if (n < 2 * k) {
        throw ValidationError("ridge cross-validation needs at least 2 rows per fold (" + std::to_string(2 * k) +
                              " rows), got " + std::to_string(n));
    }

    const Matrix x = design_matrix(table, columns);

    RidgeModel model;
    model.schema = table.schema;
    model.features = columns;
    model.cv_mse.assign(alpha_grid.size(), 0.0);

    for (std::size_t fold = 0; fold < k; ++fold) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < n; ++i) (i % k == fold ? test : train).push_back(i);
        const Matrix xtr = take_rows(x, train);
        const Matrix xte = take_rows(x, test);
        std::vector<double> ytr;
        for (auto i : train) ytr.push_back(targets[i]);
        const auto stats = fit_standardization(xtr, policy);
        const Matrix ztr = stats.apply(xtr);
        const Matrix zte = stats.apply(xte);
        for (std::size_t a = 0; a < alpha_grid.size(); ++a) {
            const auto sol = solve_ridge(ztr, ytr, alpha_grid[a]);
            double sse = 0.0;
            for (std::size_t i = 0; i < test.size(); ++i) {
                double pred = sol.intercept;
                for (std::size_t c = 0; c < zte.cols; ++c) pred += sol.weights[c] * zte(i, c);
                sse += (targets[test[i]] - pred) * (targets[test[i]] - pred);
            }
            model.cv_mse[a] += sse / static_cast<double>(test.size()) / static_cast<double>(k);
        }
    }

    std::size_t best = 0;
    for (std::size_t a = 1; a < alpha_grid.size(); ++a) {
        const bool better = model.cv_mse[a] < model.cv_mse[best] ||
                            (model.cv_mse[a] == model.cv_mse[best] && alpha_grid[a] < alpha_grid[best]);
        if (better) best = a;
    }
    model.alpha = alpha_grid[best];

    model.standardization = fit_standardization(x, policy);
    const auto sol = solve_ridge(model.standardization.apply(x), targets, model.alpha);
    model.weights = sol.weights;
    model.intercept = sol.intercept;
    return model;
}

RidgeModel fit_ridge_cv(const features::FeatureTable& table, std::span<const double> targets,
                        std::span<const double> alpha_grid, int k_folds) {
    return fit_ridge_cv(table, table.schema.names, targets, alpha_grid, k_folds, FillPolicy::kColumnMean);
}

std::vector<double> predict(const RidgeModel& model, const features::FeatureTable& table) {
    check_schema(model.schema, table.schema);
    const Matrix x = design_matrix(table, model.features);
    std::vector<double> out(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) out[r] = model.predict_row(x.row(r));
    return out;
}

}  // namespace trendcast::models
