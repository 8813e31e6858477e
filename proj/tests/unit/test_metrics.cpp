#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "trendcast/error.hpp"
#include "trendcast/metrics.hpp"

using namespace trendcast;
using namespace trendcast::evaluation;

TEST_CASE("regression metrics on a worked example") {
    const std::vector<double> y = {3, -0.5, 2, 7};
    const std::vector<double> p = {2.5, 0.0, 2, 8};
    const auto m = regression_metrics(y, p);
    CHECK(*m.r2 == doctest::Approx(0.9486081370449679));
    CHECK(m.mae == doctest::Approx(0.5));
    CHECK(m.medae == doctest::Approx(0.5));
    CHECK(m.rmse == doctest::Approx(std::sqrt(0.375)));
    CHECK(m.n == 4);
}

TEST_CASE("median absolute error uses the middle element for odd counts") {
    const std::vector<double> y = {0, 0, 0};
    const std::vector<double> p = {1, -5, 2};
    const auto m = regression_metrics(y, p);
    CHECK(m.medae == 2.0);
    CHECK_FALSE(m.r2.has_value());
}

TEST_CASE("perfect predictions") {
    const std::vector<double> y = {1, 2, 3};
    const auto m = regression_metrics(y, y);
    CHECK(*m.r2 == 1.0);
    CHECK(m.mae == 0.0);
    CHECK(m.rmse == 0.0);
}

TEST_CASE("metrics agree with a two-pass long double oracle on random vectors") {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g(10, 30);
    std::uniform_int_distribution<int> len(1, 60);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = len(rng);
        std::vector<double> y(n), p(n);
        for (int i = 0; i < n; ++i) {
            y[i] = g(rng);
            p[i] = y[i] + g(rng) / 3;
        }
        long double mean = 0;
        for (double v : y) mean += v;
        mean /= n;
        long double sse = 0, sst = 0, sae = 0;
        std::vector<long double> ae;
        for (int i = 0; i < n; ++i) {
            const long double e = static_cast<long double>(y[i]) - p[i];
            sse += e * e;
            sst += (y[i] - mean) * (y[i] - mean);
            sae += std::fabs(e);
            ae.push_back(std::fabs(e));
        }
        std::sort(ae.begin(), ae.end());
        const long double med = n % 2 ? ae[n / 2] : (ae[n / 2 - 1] + ae[n / 2]) / 2;
        const auto m = regression_metrics(y, p);
        CHECK(std::abs(m.mae - static_cast<double>(sae / n)) < 1e-9);
        CHECK(std::abs(m.rmse - static_cast<double>(std::sqrt(sse / n))) < 1e-9);
        CHECK(std::abs(m.medae - static_cast<double>(med)) < 1e-9);
        if (n > 1) CHECK(std::abs(*m.r2 - static_cast<double>(1 - sse / sst)) < 1e-9);
        CHECK(m.rmse >= m.mae - 1e-12);
    }
}

TEST_CASE("binary trend accuracy counts zero as not up") {
    const std::vector<double> t = {5, -2, 0, 3};
    const std::vector<double> p = {1, -1, 4, 2};
    const auto a = binary_trend_accuracy(t, p);
    CHECK(a.accuracy == 0.75);
    CHECK(a.majority_baseline == 0.5);
    const std::vector<double> t2 = {1, 1, 1, -1};
    const std::vector<double> p2 = {1, 1, -1, -1};
    CHECK(binary_trend_accuracy(t2, p2).accuracy == 0.75);
    CHECK(binary_trend_accuracy(t2, p2).majority_baseline == 0.75);
}

TEST_CASE("metric input validation") {
    const std::vector<double> a = {1, 2};
    const std::vector<double> b = {1};
    const std::vector<double> nan = {1, NAN};
    const std::vector<double> empty;
    CHECK_THROWS_AS(regression_metrics(a, b), ValidationError);
    CHECK_THROWS_AS(regression_metrics(empty, empty), ValidationError);
    CHECK_THROWS_AS(regression_metrics(a, nan), ValidationError);
    CHECK_THROWS_AS(binary_trend_accuracy(empty, empty), ValidationError);
}
