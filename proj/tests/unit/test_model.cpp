#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "support.hpp"
#include "trendcast/error.hpp"
#include "trendcast/experiment.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/model.hpp"
#include "trendcast/synthetic.hpp"
#include "trendcast/target_encoding.hpp"

using namespace trendcast;
using namespace trendcast::models;

TEST_CASE("ordered target encoding follows the running-prior formula") {
    const std::vector<std::string> topics = {"a", "b", "a", "a"};
    const std::vector<int> years = {2000, 2001, 2001, 2002};
    const std::vector<double> y = {10, 30, 20, 40};
    const auto enc = target_encode(topics, years, y, 1.0);
    // Visit order: (2000,a) (2001,a) (2001,b) (2002,a).
    CHECK(enc.encoded[0] == 0.0);
    CHECK(enc.encoded[2] == doctest::Approx(10.0));
    CHECK(enc.encoded[1] == doctest::Approx(15.0));
    CHECK(enc.encoded[3] == doctest::Approx(50.0 / 3.0));
    CHECK(enc.encoding.prior_mean == doctest::Approx(25.0));
    CHECK(enc.encoding.encode("a") == doctest::Approx(95.0 / 4.0));
    CHECK(enc.encoding.encode("b") == doctest::Approx(27.5));
    CHECK(enc.encoding.encode("never seen") == doctest::Approx(25.0));
}

TEST_CASE("a row's own target never reaches its encoding") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    std::vector<std::string> topics;
    std::vector<int> years;
    std::vector<double> y;
    for (int i = 0; i < 60; ++i) {
        topics.push_back("t" + std::to_string(i % 7));
        years.push_back(1980 + i / 7);
        y.push_back(g(rng));
    }
    const auto base = target_encode(topics, years, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
        auto mutated = y;
        mutated[i] += 1000.0;
        CHECK(target_encode(topics, years, mutated).encoded[i] == base.encoded[i]);
    }
    CHECK_THROWS_AS(target_encode(topics, years, y, 0.0), ValidationError);
}

TEST_CASE("kind names round-trip and reject unknown values") {
    for (auto k : {ModelKind::kBaseline, ModelKind::kRidge, ModelKind::kGbdt}) CHECK(parse_model_kind(to_string(k)) == k);
    for (auto t : {TargetKind::kPop, TargetKind::kPct}) CHECK(parse_target_kind(to_string(t)) == t);
    CHECK_THROWS_AS(parse_model_kind("forest"), ValidationError);
    CHECK_THROWS_AS(parse_target_kind("level"), ValidationError);
}

namespace {

struct Fixture {
    features::FeatureTable table;
    std::vector<double> pop;
    std::vector<double> pct;
};

Fixture random_fixture() {
    std::mt19937_64 rng(31);
    const auto data = testing::random_corpus(rng, 40, 1960, 2019, 3);
    const auto store = corpus::CorpusStore(data);
    Fixture f;
    features::FeatureOptions o;
    o.horizon = 2;
    f.table = features::build_feature_rows(store, o);
    f.pop = f.table.targets_pop();
    f.pct = f.table.targets_pct();
    return f;
}

}  // namespace

TEST_CASE("saved models reproduce predictions bit for bit") {
    auto f = random_fixture();
    const auto keep = evaluation::evaluable_rows(f.table, TargetKind::kPop);
    REQUIRE(keep.rows.size() > 50);
    const auto y = keep.targets_pop();
    FitOptions opts;
    opts.gbdt.rounds = 25;
    testing::TempDir dir;
    for (auto kind : {ModelKind::kBaseline, ModelKind::kRidge, ModelKind::kGbdt}) {
        CAPTURE(to_string(kind));
        const auto m = fit_model(kind, TargetKind::kPop, keep, y, opts);
        CHECK(kind_of(m) == kind);
        const std::string path = dir.file(model_file_name(3, TargetKind::kPop));
        save_model({m, TargetKind::kPop, 3}, path);
        const auto loaded = load_model(path);
        CHECK(loaded.horizon == 3);
        CHECK(loaded.target == TargetKind::kPop);
        CHECK(kind_of(loaded.model) == kind);
        const auto a = predict(m, f.table);
        const auto b = predict(loaded.model, f.table);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::memcmp(&a[i], &b[i], sizeof(double)) == 0);
        CHECK(to_json(loaded.model) == to_json(m));
    }
}

TEST_CASE("model documents are validated on load") {
    auto f = random_fixture();
    const auto keep = evaluation::evaluable_rows(f.table, TargetKind::kPop);
    const auto m = fit_model(ModelKind::kRidge, TargetKind::kPop, keep, keep.targets_pop());
    auto doc = to_json(m);
    doc["schema_version"] = 99;
    CHECK_THROWS_WITH_AS(model_from_json(doc), doctest::Contains("schema_version"), ValidationError);
    doc = to_json(m);
    doc.erase("payload");
    CHECK_THROWS_AS(model_from_json(doc), ValidationError);
    testing::TempDir dir;
    testing::write_file(dir.file("bad.json"), "{not json");
    CHECK_THROWS_AS(load_model(dir.file("bad.json")), ValidationError);
    CHECK_THROWS_AS(load_model(dir.file("absent.json")), IoError);
}

TEST_CASE("prediction rejects a mismatched schema and names the feature") {
    auto f = random_fixture();
    const auto keep = evaluation::evaluable_rows(f.table, TargetKind::kPop);
    const auto m = fit_model(ModelKind::kRidge, TargetKind::kPop, keep, keep.targets_pop());
    auto other = keep;
    other.schema.names.back() = "renamed";
    CHECK_THROWS_WITH_AS(predict(m, other), doctest::Contains("embed_2"), ValidationError);
}

TEST_CASE("the baseline uses exactly one lag feature") {
    auto f = random_fixture();
    const auto keep = evaluation::evaluable_rows(f.table, TargetKind::kPop);
    const auto pop = fit_model(ModelKind::kBaseline, TargetKind::kPop, keep, keep.targets_pop());
    CHECK(std::get<RidgeModel>(pop).features == std::vector<std::string>{"pop_lag0"});
    CHECK(baseline_feature(TargetKind::kPct) == "lag5_pct_new");
}

TEST_CASE("the baseline is exact on persistent topics") {
    const auto store = corpus::CorpusStore(synthetic::persistent_corpus(30, 1970, 50, 7));
    const auto table = features::build_feature_rows(store, {});
    const auto y = table.targets_pop();
    const auto m = fit_model(ModelKind::kBaseline, TargetKind::kPop, table, y);
    const auto r = evaluation::regression_metrics(y, predict(m, table));
    REQUIRE(r.r2);
    CHECK(*r.r2 >= 1.0 - 1e-6);
}

TEST_CASE("the pct baseline explains nothing on white noise") {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> g(0, 20);
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (int i = 0; i < 10000; ++i) {
        x.push_back({g(rng)});
        y.push_back(g(rng));
    }
    auto table = testing::numeric_table(x, 50);
    table.schema.names = {"lag5_pct_new"};
    const auto m = fit_model(ModelKind::kBaseline, TargetKind::kPct, table, y);
    const auto r = evaluation::regression_metrics(y, predict(m, table));
    CHECK(std::abs(*r.r2) < 0.05);
    CHECK_THROWS_WITH_AS(fit_model(ModelKind::kBaseline, TargetKind::kPop, table, y), doctest::Contains("pop_lag0"),
                         ValidationError);
}
