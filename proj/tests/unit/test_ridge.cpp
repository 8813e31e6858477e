#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "trendcast/error.hpp"
#include "trendcast/ridge.hpp"

using namespace trendcast;
using namespace trendcast::models;

namespace {

Matrix column(std::vector<double> v) {
    Matrix m(v.size(), 1);
    m.data = std::move(v);
    return m;
}

// Dense Gauss-Jordan solve with partial pivoting; independent of the Eigen path.
std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        }
        std::swap(a[c], a[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

// Solves the augmented normal equations [1 Z]^T [1 Z] + diag(0, alpha...) directly.
RidgeSolution brute_ridge(const Matrix& z, const std::vector<double>& y, double alpha) {
    const std::size_t p = z.cols + 1;
    std::vector<std::vector<double>> a(p, std::vector<double>(p, 0.0));
    std::vector<double> b(p, 0.0);
    for (std::size_t r = 0; r < z.rows; ++r) {
        std::vector<double> x = {1.0};
        for (std::size_t c = 0; c < z.cols; ++c) x.push_back(z(r, c));
        for (std::size_t i = 0; i < p; ++i) {
            b[i] += x[i] * y[r];
            for (std::size_t j = 0; j < p; ++j) a[i][j] += x[i] * x[j];
        }
    }
    for (std::size_t i = 1; i < p; ++i) a[i][i] += alpha;
    const auto sol = gauss_solve(a, b);
    return {std::vector<double>(sol.begin() + 1, sol.end()), sol[0]};
}

struct Problem {
    Matrix z;
    std::vector<double> y;
};

Problem random_problem(std::mt19937_64& rng, std::size_t n, std::size_t p) {
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> x(n, std::vector<double>(p));
    std::vector<double> beta(p);
    for (auto& b : beta) b = g(rng) * 3;
    Problem pr;
    for (auto& row : x) {
        double t = 1.5;
        for (std::size_t c = 0; c < p; ++c) {
            row[c] = g(rng) * (c + 1) + static_cast<double>(c);
            t += beta[c] * row[c];
        }
        pr.y.push_back(t + g(rng));
    }
    Matrix m(n, p);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < p; ++c) m(r, c) = x[r][c];
    }
    pr.z = standardize_fit_apply(m).values;
    return pr;
}

}  // namespace

TEST_CASE("standardization uses the population standard deviation") {
    const auto s = standardize_fit_apply(column({1, 2, 3}));
    CHECK(s.values.data[0] == doctest::Approx(-1.224744871391589));
    CHECK(s.values.data[1] == doctest::Approx(0.0));
    CHECK(s.values.data[2] == doctest::Approx(1.224744871391589));
}

TEST_CASE("constant columns map to zeros") {
    const auto s = standardize_fit_apply(column({5, 5, 5}));
    for (double v : s.values.data) CHECK(v == 0.0);
    CHECK(s.stats.stddev[0] == 0.0);
}

TEST_CASE("standardizing a standardized column changes nothing") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(3, 7);
    std::vector<double> v(100);
    for (auto& x : v) x = g(rng);
    const auto once = standardize_fit_apply(column(v));
    const auto twice = standardize_fit_apply(once.values);
    double mean = 0.0;
    for (double x : once.values.data) mean += x;
    CHECK(std::abs(mean / 100) < 1e-10);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(twice.values.data[i] - once.values.data[i]) < 1e-12);
}

TEST_CASE("missing values are imputed with the column mean before scaling") {
    const auto s = standardize_fit_apply(column({1, features::kMissing, 3}));
    CHECK(s.stats.fill[0] == 2.0);
    CHECK(s.values.data[1] == doctest::Approx(0.0));
    const auto zero = standardize_fit_apply(column({1, features::kMissing, 3}), FillPolicy::kZero);
    CHECK(zero.stats.fill[0] == 0.0);
    CHECK_THROWS_AS(standardize_fit_apply(Matrix(0, 2)), ValidationError);
}

TEST_CASE("ridge solution matches a direct solve of the augmented normal equations") {
    std::mt19937_64 rng(17);
    for (double alpha : {0.1, 1.0, 10.0, 250.0}) {
        const auto pr = random_problem(rng, 60, 6);
        const auto got = solve_ridge(pr.z, pr.y, alpha);
        const auto want = brute_ridge(pr.z, pr.y, alpha);
        CHECK(got.intercept == doctest::Approx(want.intercept).epsilon(1e-9));
        for (std::size_t i = 0; i < want.weights.size(); ++i) {
            CHECK(got.weights[i] == doctest::Approx(want.weights[i]).epsilon(1e-9));
        }
    }
    const auto pr = random_problem(rng, 10, 2);
    CHECK_THROWS_AS(solve_ridge(pr.z, pr.y, 0.0), ValidationError);
}

TEST_CASE("perturbing any fitted coefficient never lowers the penalized objective") {
    std::mt19937_64 rng(23);
    const auto pr = random_problem(rng, 200, 10);
    const double alpha = 1.0;
    const auto sol = solve_ridge(pr.z, pr.y, alpha);
    const double best = ridge_objective(pr.z, pr.y, sol, alpha);
    for (std::size_t i = 0; i <= sol.weights.size(); ++i) {
        for (double d : {-1e-3, 1e-3}) {
            auto s = sol;
            (i == sol.weights.size() ? s.intercept : s.weights[i]) += d;
            CHECK(ridge_objective(pr.z, pr.y, s, alpha) >= best);
        }
    }
}

TEST_CASE("noiseless linear data recovers the generating coefficients") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 200; ++i) {
        const double a = g(rng) * 2, b = g(rng) + 1;
        x.push_back({a, b});
        y.push_back(3 * a - 2 * b + 1);
    }
    const auto t = testing::numeric_table(x);
    const std::vector<double> grid = {0.1};
    const auto m = fit_ridge_cv(t, y, grid, 5);
    const double w1 = m.weights[0] / m.standardization.stddev[0];
    const double w2 = m.weights[1] / m.standardization.stddev[1];
    CHECK(std::abs(w1 - 3) < 0.05);
    CHECK(std::abs(w2 + 2) < 0.05);
}

TEST_CASE("huge alpha collapses predictions to the target mean") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    double mean = 0.0;
    for (int i = 0; i < 100; ++i) {
        x.push_back({g(rng), g(rng), g(rng)});
        y.push_back(5 + 4 * x.back()[0] + g(rng));
        mean += y.back();
    }
    mean /= 100;
    const auto t = testing::numeric_table(x);
    const std::vector<double> grid = {1e9};
    const auto m = fit_ridge_cv(t, y, grid, 5);
    for (double w : m.weights) CHECK(std::abs(w) < 1e-6);
    for (double p : predict(m, t)) CHECK(std::abs(p - mean) <= 1e-3 * std::abs(mean));
}

TEST_CASE("cross-validation picks the lowest CV error and the smallest alpha on ties") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 50; ++i) {
        x.push_back({g(rng), g(rng)});
        y.push_back(x.back()[0] + 0.1 * g(rng));
    }
    const auto t = testing::numeric_table(x);
    const auto m = fit_ridge_cv(t, y);
    REQUIRE(m.cv_mse.size() == 3);
    const auto best = std::min_element(m.cv_mse.begin(), m.cv_mse.end()) - m.cv_mse.begin();
    CHECK(m.alpha == default_alpha_grid()[static_cast<std::size_t>(best)]);

    // A constant target makes every alpha equally good.
    const std::vector<double> flat(50, 2.0);
    const std::vector<double> grid = {10.0, 1.0, 5.0};
    CHECK(fit_ridge_cv(t, flat, grid, 5).alpha == 1.0);
}

TEST_CASE("ridge input validation") {
    const auto t = testing::numeric_table({{1}, {2}, {3}, {4}, {5}, {6}, {7}, {8}, {9}});
    const std::vector<double> y = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK_THROWS_AS(fit_ridge_cv(t, y), ValidationError);  // 9 rows < 2 per fold
    const std::vector<double> bad_grid = {0.0};
    CHECK_THROWS_AS(fit_ridge_cv(t, y, bad_grid, 2), ValidationError);
    const std::vector<double> empty;
    CHECK_THROWS_AS(fit_ridge_cv(t, y, empty, 2), ValidationError);
}

TEST_CASE("predict checks the schema and a zero-weight model is constant") {
    const auto t = testing::numeric_table({{1, 2}, {2, 1}, {3, 5}, {4, 4}});
    RidgeModel m;
    m.schema = t.schema;
    m.features = t.schema.names;
    m.standardization = fit_standardization(design_matrix(t, m.features));
    m.weights = {0.0, 0.0};
    m.intercept = 7.5;
    for (double p : predict(m, t)) CHECK(p == 7.5);

    auto other = testing::numeric_table({{1, 2, 3}});
    CHECK_THROWS_WITH_AS(predict(m, other), doctest::Contains("x2"), ValidationError);
    other = testing::numeric_table({{1}});
    CHECK_THROWS_WITH_AS(predict(m, other), doctest::Contains("x1"), ValidationError);
}
