#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "trendcast/correlation.hpp"
#include "trendcast/error.hpp"

using namespace trendcast;
using namespace trendcast::evaluation;

namespace {

YearValues random_series(std::mt19937_64& rng, int first, int last) {
    std::normal_distribution<double> g;
    YearValues v;
    for (int y = first; y <= last; ++y) v[y] = g(rng);
    return v;
}

}  // namespace

TEST_CASE("a series correlates perfectly with itself at lag zero") {
    std::mt19937_64 rng(1);
    const auto a = random_series(rng, 1980, 2019);
    const auto c = pearson_lagged(a, a, 0);
    CHECK(*c.r == doctest::Approx(1.0));
    CHECK(c.n_overlap == 40);
}

TEST_CASE("a leading series peaks at its lead") {
    std::mt19937_64 rng(2);
    const auto b = random_series(rng, 1980, 2019);
    YearValues a;
    for (const auto& [y, v] : b) a[y + 2] = 3 * v + 1;
    CHECK(*pearson_lagged(a, b, 2).r == doctest::Approx(1.0));
    CHECK(pearson_lagged(a, b, 2).n_overlap == 40);
    for (int lag : {-2, -1, 0, 1, 3}) CHECK(std::abs(*pearson_lagged(a, b, lag).r) < 0.6);
}

TEST_CASE("independent noise is nearly uncorrelated") {
    std::mt19937_64 rng(3);
    const auto a = random_series(rng, 1, 5000);
    const auto b = random_series(rng, 1, 5000);
    CHECK(std::abs(*pearson_lagged(a, b, 0).r) < 0.1);
}

TEST_CASE("swapping the series negates the lag") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_series(rng, 1970, 2000);
        const auto b = random_series(rng, 1975, 2010);
        for (int k = -5; k <= 5; ++k) {
            const auto x = pearson_lagged(a, b, k);
            const auto y = pearson_lagged(b, a, -k);
            CHECK(x.n_overlap == y.n_overlap);
            CHECK(*x.r == doctest::Approx(*y.r).epsilon(1e-12));
        }
    }
}

TEST_CASE("correlation is undefined without enough varying overlap") {
    const YearValues a = {{2000, 1}, {2001, 2}};
    CHECK_FALSE(pearson_lagged(a, a, 0).r);
    const YearValues flat = {{2000, 1}, {2001, 1}, {2002, 1}};
    const YearValues up = {{2000, 1}, {2001, 2}, {2002, 3}};
    CHECK_FALSE(pearson_lagged(flat, up, 0).r);
    CHECK_FALSE(pearson_lagged(up, up, 10).r);
    CHECK(pearson_lagged(up, up, 10).n_overlap == 0);
}

TEST_CASE("indicator names and corpus profiles") {
    CHECK(parse_indicator("patents") == Indicator::kPatents);
    CHECK_THROWS_AS(parse_indicator("citations"), ValidationError);

    corpus::CorpusData data;
    data.globals = testing::flat_globals(1990, 2009);
    std::map<int, std::int64_t> pubs;
    for (int y = 1990; y <= 2009; ++y) {
        pubs[y] = 100 + (y % 3) * 40 + (y - 1990) * 5;
        if (y > 1990) data.patents.push_back({"A", y - 1, pubs[y] / 10});  // patents lead by one year
    }
    testing::add_topic(data, "A", pubs);
    const corpus::CorpusStore store(data);
    const auto& topic = *store.find("a");
    const std::vector<int> lags = {0, 1, 2};
    const auto p = correlation_profile(store, topic, Indicator::kPublications, Indicator::kPatents, lags);
    REQUIRE(p.values.size() == 3);
    CHECK(*p.values[1].r == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(*p.values[1].r > *p.values[0].r);
    const auto pooled = pooled_correlation(store, Indicator::kPublications, Indicator::kPatents, 1);
    CHECK(*pooled.r == doctest::Approx(*p.values[1].r));

    std::ostringstream out;
    const std::vector<CorrelationProfile> profiles = {p};
    write_profiles_csv(profiles, out);
    CHECK(out.str().rfind("topic,indicator,lag,r,n_overlap\n", 0) == 0);
}
