#pragma once

#include <memory>

#include "trendcast/experiment.hpp"
#include "trendcast/features.hpp"
#include "trendcast/model.hpp"
#include "trendcast/service.hpp"
#include "trendcast/synthetic.hpp"

namespace testing {

using ModelMap = std::map<std::pair<int, trendcast::models::TargetKind>, trendcast::models::Model>;

/// Pop and pct models for horizons 1..max_horizon trained on every evaluable row.
inline ModelMap train_models(const trendcast::corpus::CorpusStore& store, int max_horizon,
                             trendcast::models::ModelKind kind, int rounds = 20) {
    using namespace trendcast;
    ModelMap out;
    models::FitOptions opts;
    opts.gbdt.rounds = rounds;
    for (int h = 1; h <= max_horizon; ++h) {
        features::FeatureOptions fo;
        fo.horizon = h;
        const auto table = features::build_feature_rows(store, fo);
        for (auto target : {models::TargetKind::kPop, models::TargetKind::kPct}) {
            const auto rows = evaluation::evaluable_rows(table, target);
            const auto y = target == models::TargetKind::kPop ? rows.targets_pop() : rows.targets_pct();
            out.emplace(std::pair{h, target}, models::fit_model(kind, target, rows, y, opts));
        }
    }
    return out;
}

inline trendcast::corpus::CorpusData synthetic_data(std::size_t n_topics, std::size_t embedding_dim = 4,
                                                    std::uint64_t seed = 42) {
    trendcast::synthetic::LeadingIndicatorOptions o;
    o.n_topics = n_topics;
    o.embedding_dim = embedding_dim;
    o.seed = seed;
    return trendcast::synthetic::leading_indicator_corpus(o).data;
}

}  // namespace testing
