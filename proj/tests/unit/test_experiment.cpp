#include <doctest.h>

#include <sstream>

#include "trendcast/error.hpp"
#include "trendcast/experiment.hpp"
#include "trendcast/synthetic.hpp"

using namespace trendcast;
using namespace trendcast::evaluation;

TEST_CASE("the baseline forecasts persistent topics perfectly out of sample") {
    const corpus::CorpusStore store(synthetic::persistent_corpus(25, 1970, 50, 3));
    for (auto split : {SplitKind::kTemporal, SplitKind::kTopic}) {
        ExperimentConfig c;
        c.model = models::ModelKind::kBaseline;
        c.split = split;
        c.n_splits = 5;
        const auto r = run_experiment(store, c);
        REQUIRE(r.pooled.r2);
        CHECK(*r.pooled.r2 >= 1.0 - 1e-6);
        CHECK(r.folds.size() == 5);
        CHECK(r.model_label == "baseline");
    }
}

TEST_CASE("experiments are deterministic and independent of the worker count") {
    synthetic::LeadingIndicatorOptions o;
    o.n_topics = 20;
    o.embedding_dim = 3;
    const corpus::CorpusStore store(synthetic::leading_indicator_corpus(o).data);
    ExperimentConfig c;
    c.n_splits = 4;
    c.fit.gbdt.rounds = 30;
    c.target = models::TargetKind::kPct;
    const auto a = run_experiment(store, c);
    c.workers = 3;
    const auto b = run_experiment(store, c);
    CHECK(a.model_label == "gbdt+embed");
    CHECK(a.predictions == b.predictions);
    CHECK(a.test_rows == b.test_rows);
    CHECK(*a.pooled.r2 == *b.pooled.r2);
    REQUIRE(a.pooled.binary_accuracy);
    CHECK(*a.pooled.binary_accuracy >= 0.0);
    CHECK(*a.pooled.binary_accuracy <= 1.0);
    CHECK(a.pooled.n == a.predictions.size());

    std::ostringstream out;
    write_report_csv_header(out);
    write_report_csv(a, out);
    const auto text = out.str();
    CHECK(text.rfind("model,target,split,fold,r2,mae,medae,rmse,binary_acc,baseline_acc,n\n", 0) == 0);
    CHECK(text.find("gbdt+embed,pct,temporal,pooled,") != std::string::npos);
    CHECK(format_report_text({a}).find("gbdt+embed") != std::string::npos);
}

TEST_CASE("rows without the target are dropped before splitting") {
    features::FeatureTable t;
    t.schema.names = {"pop_lag0"};
    for (int i = 0; i < 4; ++i) {
        features::FeatureRow r;
        r.topic_id = "t";
        r.base_year = 2000 + i;
        r.values = {1.0};
        r.target_pop = i == 2 ? features::kMissing : 1.0;
        t.rows.push_back(r);
    }
    CHECK(evaluable_rows(t, models::TargetKind::kPop).rows.size() == 3);
    CHECK(evaluable_rows(t, models::TargetKind::kPct).rows.empty());
    ExperimentConfig c;
    c.n_splits = 30;
    CHECK_THROWS_AS(run_experiment(t, c), ValidationError);
}
