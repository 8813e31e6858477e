#include "trendcast/cli.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "trendcast/corpus.hpp"
#include "trendcast/correlation.hpp"
#include "trendcast/error.hpp"
#include "trendcast/experiment.hpp"
#include "trendcast/features.hpp"
#include "trendcast/importance.hpp"
#include "trendcast/model.hpp"
#include "trendcast/movers.hpp"
#include "trendcast/patents.hpp"
#include "trendcast/service.hpp"
#include "trendcast/synthetic.hpp"

namespace trendcast::cli {

namespace {

using models::TargetKind;

struct Config {
    // corpus inputs
    std::string corpus_dir;
    std::string counts, global, patents, embeddings;
    std::string start_window = "current";
    // artifacts
    std::string out;
    std::string features_path;
    std::string models_dir;
    // modelling
    int horizon = features::kDefaultHorizon;
    bool all_horizons = false;
    std::string model = "gbdt";
    std::string target = "pop";
    std::string split = "temporal";
    std::size_t n_splits = evaluation::kDefaultSplits;
    std::uint64_t seed = 42;
    int from = corpus::kModernEraStart;
    int to = 2019;
    bool no_embeddings = false;
    int rounds = 500;
    int max_depth = 6;
    double learning_rate = 0.05;
    int min_samples_leaf = 20;
    unsigned workers = 1;
    bool folds = false;
    // predict / movers
    std::vector<std::string> topics;
    int max_horizon = 0;
    int base_year = 0;
    // correlate
    std::string series = "popularity";
    std::string indicator = "patents";
    int max_lag = 5;
    // importance
    std::string metric = "mse";
    int repeats = 5;
    // serve
    std::string host = "0.0.0.0";
    int port = 8080;
    std::string static_dir;
    // fetch-patents
    std::string query;
    std::string topic;
    std::string endpoint = patents::FetchOptions{}.endpoint;
    std::string api_key;
    int interval_ms = 1000;
    int retries = 3;
    // synth
    std::string kind = "leading";
    std::size_t n_topics = 50;
    int first_year = 1975;
    int n_years = 45;
    std::size_t embedding_dim = 0;
};

std::string env_name(const std::string& flag) {
    std::string name = "TRENDCAST_";
    for (char c : flag.substr(2)) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return name;
}

template <typename T>
CLI::Option* opt(CLI::App* app, const std::string& flag, T& var, const std::string& desc) {
    return app->add_option(flag, var, desc)->envname(env_name(flag))->capture_default_str();
}

CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& desc) {
    return app->add_flag(name, var, desc)->envname(env_name(name));
}

void add_corpus_options(CLI::App* app, Config& c) {
    opt(app, "--corpus", c.corpus_dir, "Corpus directory with topic_counts.csv, global_stats.csv, patents.csv");
    opt(app, "--counts", c.counts, "Topic counts CSV (topic,year,publications,review_publications)");
    opt(app, "--global", c.global, "Global stats CSV (year,medline_total,us_publication_fraction,patents_total)");
    opt(app, "--patents", c.patents, "Patent counts CSV (topic,year,patent_count)");
    opt(app, "--embeddings", c.embeddings, "Topic embeddings CSV (topic,e0,e1,...)");
    opt(app, "--start-window", c.start_window, "Training-start activity window: current [y-4,y] or preceding [y-5,y-1]")
        ->check(CLI::IsMember({"current", "preceding"}));
}

void add_feature_options(CLI::App* app, Config& c) {
    opt(app, "--horizon", c.horizon, "Forecast horizon in years, 1-6");
    opt(app, "--from", c.from, "First base year");
    opt(app, "--to", c.to, "Last base year");
    flag(app, "--no-embeddings", c.no_embeddings, "Leave topic embeddings out of the feature set");
}

void add_model_options(CLI::App* app, Config& c) {
    opt(app, "--model", c.model, "Model kind")->check(CLI::IsMember({"baseline", "ridge", "gbdt"}));
    opt(app, "--target", c.target, "Target kind")->check(CLI::IsMember({"pop", "pct"}));
    opt(app, "--seed", c.seed, "Random seed");
    opt(app, "--rounds", c.rounds, "Boosting rounds");
    opt(app, "--max-depth", c.max_depth, "Maximum tree depth");
    opt(app, "--learning-rate", c.learning_rate, "Boosting learning rate");
    opt(app, "--min-samples-leaf", c.min_samples_leaf, "Minimum rows per tree leaf");
}

void check_horizon(int h) {
    if (h < features::kMinHorizon || h > features::kMaxHorizon) throw ValidationError("horizon must be in [1,6]");
}

void check_years(const Config& c) {
    if (c.from > c.to) {
        throw ValidationError("--from " + std::to_string(c.from) + " is after --to " + std::to_string(c.to));
    }
}

corpus::CorpusStore load_store(const Config& c) {
    corpus::IngestPaths paths;
    if (!c.corpus_dir.empty()) paths = corpus::paths_in_directory(c.corpus_dir);
    if (!c.counts.empty()) paths.counts = c.counts;
    if (!c.global.empty()) paths.global = c.global;
    if (!c.patents.empty()) paths.patents = c.patents;
    if (!c.embeddings.empty()) paths.embeddings = c.embeddings;
    if (paths.counts.empty() || paths.global.empty() || paths.patents.empty()) {
        throw ValidationError("corpus input needs --corpus or all of --counts, --global and --patents");
    }
    const auto window =
        c.start_window == "preceding" ? corpus::StartWindow::kPrecedingOnly : corpus::StartWindow::kIncludeCurrent;
    return corpus::ingest(paths, window);
}

models::FitOptions fit_options(const Config& c) {
    models::FitOptions fit;
    fit.gbdt.rounds = c.rounds;
    fit.gbdt.max_depth = c.max_depth;
    fit.gbdt.learning_rate = c.learning_rate;
    fit.gbdt.min_samples_leaf = c.min_samples_leaf;
    fit.gbdt.seed = c.seed;
    fit.gbdt.validate();
    return fit;
}

features::FeatureOptions feature_options(const Config& c, int horizon) {
    features::FeatureOptions o;
    o.horizon = horizon;
    o.embeddings = !c.no_embeddings;
    o.first_base_year = c.from;
    o.last_base_year = c.to;
    return o;
}

void with_output(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& fn) {
    if (path.empty() || path == "-") {
        fn(out);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    fn(f);
    f.flush();
    if (!f) throw IoError("cannot write '" + path + "'");
}

void require(const std::string& value, const std::string& name) {
    if (value.empty()) throw ValidationError(name + " is required");
}

void make_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

service::Registry registry_for(const Config& c) {
    require(c.models_dir, "--models");
    auto store = std::make_shared<const corpus::CorpusStore>(load_store(c));
    return service::make_registry(std::move(store), service::load_models(c.models_dir));
}

int cmd_ingest(const Config& c, std::ostream& out) {
    require(c.out, "--out");
    const auto store = load_store(c);
    corpus::write_corpus_directory(corpus::snapshot_data(store), c.out);
    with_output(c.out + "/popularity.csv", out, [&](std::ostream& os) { corpus::write_popularity_csv(store, os); });
    with_output(c.out + "/topics.csv", out, [&](std::ostream& os) { corpus::write_topics_csv(store, os); });
    out << "ingested " << store.topics().size() << " topics into " << c.out << '\n';
    return kExitOk;
}

int cmd_featurize(const Config& c, std::ostream& out) {
    check_horizon(c.horizon);
    check_years(c);
    const auto store = load_store(c);
    const auto table = features::build_feature_rows(store, feature_options(c, c.horizon));
    with_output(c.out, out, [&](std::ostream& os) { features::write_features_csv(table, os); });
    return kExitOk;
}

int cmd_train(const Config& c, std::ostream& out) {
    check_horizon(c.horizon);
    check_years(c);
    require(c.out, "--out");
    const auto kind = models::parse_model_kind(c.model);
    const auto fit = fit_options(c);
    if (!c.features_path.empty() && c.all_horizons) {
        throw ValidationError("--features holds one horizon and cannot be combined with --all-horizons");
    }
    std::vector<int> horizons;
    if (c.all_horizons) {
        for (int h = features::kMinHorizon; h <= features::kMaxHorizon; ++h) horizons.push_back(h);
    } else {
        horizons.push_back(c.horizon);
    }
    std::vector<TargetKind> targets = {models::parse_target_kind(c.target)};
    if (c.all_horizons) targets = {TargetKind::kPop, TargetKind::kPct};

    std::optional<corpus::CorpusStore> store;
    if (c.features_path.empty()) store = load_store(c);
    make_dir(c.out);
    for (int h : horizons) {
        features::FeatureTable table;
        if (store) {
            table = features::build_feature_rows(*store, feature_options(c, h));
        } else {
            table = features::read_features_csv(c.features_path);
            for (const auto& row : table.rows) {
                if (row.horizon != h) {
                    throw ValidationError(c.features_path + " holds horizon " + std::to_string(row.horizon) +
                                          " rows but --horizon is " + std::to_string(h));
                }
            }
        }
        for (auto target : targets) {
            const auto rows = evaluation::evaluable_rows(table, target);
            const auto y = target == TargetKind::kPop ? rows.targets_pop() : rows.targets_pct();
            models::SavedModel saved{models::fit_model(kind, target, rows, y, fit), target, h};
            const auto path = c.out + "/" + models::model_file_name(h, target);
            models::save_model(saved, path);
            out << path << '\n';
        }
    }
    return kExitOk;
}

int cmd_evaluate(const Config& c, std::ostream& out) {
    check_horizon(c.horizon);
    check_years(c);
    const auto store = load_store(c);
    evaluation::ExperimentConfig config;
    config.model = models::parse_model_kind(c.model);
    config.target = models::parse_target_kind(c.target);
    config.split = evaluation::parse_split_kind(c.split);
    config.embeddings = !c.no_embeddings;
    config.horizon = c.horizon;
    config.n_splits = c.n_splits;
    config.seed = c.seed;
    config.first_base_year = c.from;
    config.last_base_year = c.to;
    config.fit = fit_options(c);
    config.workers = std::max(1u, c.workers);
    const auto result = evaluation::run_experiment(store, config);
    with_output(c.out, out, [&](std::ostream& os) {
        evaluation::write_report_csv_header(os);
        evaluation::write_report_csv(result, os, !c.folds);
    });
    return kExitOk;
}

int cmd_predict(const Config& c, std::ostream& out) {
    const auto reg = registry_for(c);
    const int max_h = c.max_horizon == 0 ? reg.max_horizon : c.max_horizon;
    check_horizon(max_h);
    if (max_h > reg.max_horizon) {
        throw ValidationError("models are loaded for horizons 1.." + std::to_string(reg.max_horizon));
    }
    auto topics = c.topics;
    if (topics.empty()) {
        for (const auto& [id, rec] : reg.corpus->topics()) topics.push_back(id);
    }
    const auto body = service::forecast_batch(reg, topics, max_h);
    with_output(c.out, out, [&](std::ostream& os) { os << body.dump() << '\n'; });
    return kExitOk;
}

int cmd_correlate(const Config& c, std::ostream& out, bool years_given) {
    if (c.max_lag < 0) throw ValidationError("--max-lag must be non-negative");
    check_years(c);
    const auto store = load_store(c);
    const auto series = evaluation::parse_indicator(c.series);
    const auto indicator = evaluation::parse_indicator(c.indicator);
    std::vector<int> lags;
    for (int lag = -c.max_lag; lag <= c.max_lag; ++lag) lags.push_back(lag);

    std::vector<evaluation::CorrelationProfile> profiles;
    if (c.topics.empty()) {
        evaluation::CorrelationProfile pooled;
        pooled.topic_id = "all";
        pooled.target = series;
        pooled.indicator = indicator;
        pooled.lags = lags;
        const int from = years_given ? c.from : corpus::kEarliestYear;
        const int to = years_given ? c.to : corpus::kLatestYear;
        for (int lag : lags) pooled.values.push_back(evaluation::pooled_correlation(store, series, indicator, lag, from, to));
        profiles.push_back(std::move(pooled));
    } else {
        for (const auto& t : c.topics) {
            const auto* rec = store.find(t);
            if (!rec) throw ValidationError("unknown topic '" + t + "'");
            profiles.push_back(evaluation::correlation_profile(store, *rec, series, indicator, lags));
        }
    }
    with_output(c.out, out, [&](std::ostream& os) { evaluation::write_profiles_csv(profiles, os); });
    return kExitOk;
}

int cmd_importance(const Config& c, std::ostream& out) {
    check_horizon(c.horizon);
    check_years(c);
    require(c.models_dir, "--models");
    if (c.repeats < 1) throw ValidationError("--repeats must be at least 1");
    evaluation::ErrorMetric metric;
    if (c.metric == "mse") {
        metric = evaluation::ErrorMetric::kMse;
    } else if (c.metric == "mae") {
        metric = evaluation::ErrorMetric::kMae;
    } else if (c.metric == "1-r2") {
        metric = evaluation::ErrorMetric::kOneMinusR2;
    } else {
        throw ValidationError("unknown metric '" + c.metric + "' (expected mse, mae or 1-r2)");
    }
    const auto target = models::parse_target_kind(c.target);
    const auto saved = models::load_model(c.models_dir + "/" + models::model_file_name(c.horizon, target));
    const auto store = load_store(c);
    auto options = feature_options(c, c.horizon);
    options.embeddings = models::schema_of(saved.model).embedding_dim > 0;
    const auto rows = evaluation::evaluable_rows(features::build_feature_rows(store, options), target);
    const auto y = target == TargetKind::kPop ? rows.targets_pop() : rows.targets_pct();
    const auto report = evaluation::permutation_importance(saved.model, rows, y, metric, c.repeats, c.seed);
    with_output(c.out, out, [&](std::ostream& os) { evaluation::write_importance_csv(report, os); });
    return kExitOk;
}

int cmd_rank_movers(const Config& c, std::ostream& out) {
    check_horizon(c.horizon);
    const auto reg = registry_for(c);
    if (c.horizon > reg.max_horizon) {
        throw ValidationError("models are loaded for horizons 1.." + std::to_string(reg.max_horizon));
    }
    const auto& store = *reg.corpus;
    const int base_year = c.base_year == 0 ? store.last_year() : c.base_year;
    const auto& model = reg.model(c.horizon, TargetKind::kPct);
    features::FeatureTable table;
    table.schema = models::schema_of(model);
    std::vector<evaluation::MoverEntry> entries;
    for (const auto& [id, rec] : store.topics()) {
        if (!service::has_sufficient_history(rec) || !rec.counts.count(base_year)) continue;
        if (*rec.meta.training_start_year > base_year) continue;
        table.rows.push_back(features::build_feature_row(store, rec, base_year, c.horizon, table.schema.embedding_dim));
        entries.push_back({id,
                           features::pct_change(store.popularity_at(rec, base_year), store.popularity_at(rec, base_year - 1)),
                           0.0});
    }
    const auto pred = models::predict(model, table);
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].predicted_pct = pred[i];
    const auto report = evaluation::rank_movers(std::move(entries), base_year);
    with_output(c.out, out, [&](std::ostream& os) { evaluation::write_movers_csv(report, os); });
    return kExitOk;
}

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

int cmd_serve(const Config& c, std::ostream& out) {
    if (c.port < 0 || c.port > 65535) throw ValidationError("--port must be in [0,65535]");
    auto reg = std::make_shared<const service::Registry>(registry_for(c));
    service::ForecastService svc(reg);
    service::ServerConfig sc;
    sc.host = c.host;
    sc.port = c.port;
    if (!c.static_dir.empty()) sc.static_dir = c.static_dir;
    service::HttpServer server(svc, sc);
    const int port = server.bind();
    out << "serving " << reg->corpus->topics().size() << " topics, horizons 1.." << reg->max_horizon << " on "
        << c.host << ':' << port << std::endl;
    g_stop = false;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::thread watcher([&] {
        while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        server.stop();
    });
    server.listen();
    g_stop = true;
    watcher.join();
    return kExitOk;
}

int cmd_fetch_patents(const Config& c, std::ostream& out) {
    require(c.query, "--query");
    require(c.out, "--out");
    if (c.interval_ms < 1000) throw ValidationError("--interval-ms must be at least 1000");
    if (c.retries < 0) throw ValidationError("--retries must be non-negative");
    patents::FetchOptions options;
    options.endpoint = c.endpoint;
    options.api_key = c.api_key;
    options.min_interval = std::chrono::milliseconds(c.interval_ms);
    options.retries = c.retries;
    const auto added = patents::fetch_patent_counts_to_file(c.query, {c.from, c.to}, c.out, options, c.topic);
    out << "added " << added << " rows to " << c.out << '\n';
    return kExitOk;
}

int cmd_synth(const Config& c, std::ostream& out) {
    require(c.out, "--out");
    if (c.n_topics < 1 || c.n_years < 1) throw ValidationError("--topics and --years must be positive");
    corpus::CorpusData data;
    if (c.kind == "leading") {
        synthetic::LeadingIndicatorOptions o;
        o.n_topics = c.n_topics;
        o.first_year = c.first_year;
        o.n_years = c.n_years;
        o.seed = c.seed;
        o.embedding_dim = c.embedding_dim;
        data = synthetic::leading_indicator_corpus(o).data;
    } else {
        data = synthetic::persistent_corpus(c.n_topics, c.first_year, c.n_years, c.seed);
    }
    corpus::CorpusStore check(data);  // refuse to write a corpus that would not ingest
    corpus::write_corpus_directory(data, c.out);
    out << "wrote " << check.topics().size() << " topics to " << c.out << '\n';
    return kExitOk;
}

void print_error(std::ostream& err, const std::string& kind, const std::string& message) {
    err << nlohmann::json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Forecast scientific topic popularity from publication, review and patent counts", "trendcast"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", "trendcast 0.1.0");

    auto* ingest = app.add_subcommand("ingest", "Validate input CSVs and write a canonical corpus directory");
    add_corpus_options(ingest, c);
    opt(ingest, "--out", c.out, "Output corpus directory");

    auto* featurize = app.add_subcommand("featurize", "Build the feature table for one horizon");
    add_corpus_options(featurize, c);
    add_feature_options(featurize, c);
    opt(featurize, "--out", c.out, "Output CSV (default standard output)");

    auto* train = app.add_subcommand("train", "Fit and save models");
    add_corpus_options(train, c);
    add_feature_options(train, c);
    add_model_options(train, c);
    opt(train, "--features", c.features_path, "Train from a featurize CSV instead of the corpus");
    flag(train, "--all-horizons", c.all_horizons, "Train pop and pct models for every horizon 1-6");
    opt(train, "--out", c.out, "Model directory");

    auto* evaluate = app.add_subcommand("evaluate", "Cross-validate a model and report pooled metrics as CSV");
    add_corpus_options(evaluate, c);
    add_feature_options(evaluate, c);
    add_model_options(evaluate, c);
    opt(evaluate, "--split", c.split, "Split kind")->check(CLI::IsMember({"temporal", "topic"}));
    opt(evaluate, "--n-splits", c.n_splits, "Number of folds");
    opt(evaluate, "--workers", c.workers, "Worker threads for folds");
    flag(evaluate, "--folds", c.folds, "Also report every fold");
    opt(evaluate, "--out", c.out, "Output CSV (default standard output)");

    auto* predict = app.add_subcommand("predict", "Forecast topics with saved models; prints the service's forecast JSON");
    add_corpus_options(predict, c);
    opt(predict, "--models", c.models_dir, "Model directory");
    opt(predict, "--topic", c.topics, "Topic to forecast (repeatable; default all topics)")->delimiter(',');
    opt(predict, "--max-horizon", c.max_horizon, "Forecast horizons 1..N (default all loaded)");
    opt(predict, "--out", c.out, "Output JSON (default standard output)");

    auto* correlate = app.add_subcommand("correlate", "Lagged Pearson correlations, pooled or per topic");
    add_corpus_options(correlate, c);
    opt(correlate, "--series", c.series, "Series being predicted")
        ->check(CLI::IsMember({"popularity", "review_popularity", "research_popularity", "publications", "patents"}));
    opt(correlate, "--indicator", c.indicator, "Candidate leading indicator")
        ->check(CLI::IsMember({"popularity", "review_popularity", "research_popularity", "publications", "patents"}));
    opt(correlate, "--max-lag", c.max_lag, "Lags -N..N; positive lag means the indicator leads");
    opt(correlate, "--topic", c.topics, "Per-topic profile (repeatable; default pooled over all topics)")->delimiter(',');
    auto* corr_from = opt(correlate, "--from", c.from, "First year of the series (pooled only)");
    auto* corr_to = opt(correlate, "--to", c.to, "Last year of the series (pooled only)");
    opt(correlate, "--out", c.out, "Output CSV (default standard output)");

    auto* importance = app.add_subcommand("importance", "Permutation importance of a saved model");
    add_corpus_options(importance, c);
    opt(importance, "--models", c.models_dir, "Model directory");
    opt(importance, "--horizon", c.horizon, "Horizon of the model to inspect");
    opt(importance, "--target", c.target, "Target of the model to inspect")->check(CLI::IsMember({"pop", "pct"}));
    opt(importance, "--from", c.from, "First base year of the evaluation rows");
    opt(importance, "--to", c.to, "Last base year of the evaluation rows");
    opt(importance, "--metric", c.metric, "Error metric")->check(CLI::IsMember({"mse", "mae", "1-r2"}));
    opt(importance, "--repeats", c.repeats, "Shuffles per feature");
    opt(importance, "--seed", c.seed, "Random seed");
    opt(importance, "--out", c.out, "Output CSV (default standard output)");

    auto* movers = app.add_subcommand("rank-movers", "Rank predicted risers, fallers and reversals");
    add_corpus_options(movers, c);
    opt(movers, "--models", c.models_dir, "Model directory");
    opt(movers, "--horizon", c.horizon, "Forecast horizon");
    opt(movers, "--base-year", c.base_year, "Base year (default the corpus's last year)");
    opt(movers, "--out", c.out, "Output CSV (default standard output)");

    auto* serve = app.add_subcommand("serve", "Serve the HTTP forecast API");
    add_corpus_options(serve, c);
    opt(serve, "--models", c.models_dir, "Model directory");
    opt(serve, "--host", c.host, "Listen address");
    opt(serve, "--port", c.port, "Listen port (0 picks a free port)");
    opt(serve, "--static", c.static_dir, "Directory served under /app");

    auto* fetch = app.add_subcommand("fetch-patents", "Fetch yearly patent counts for a query into patents.csv");
    opt(fetch, "--query", c.query, "Search text");
    opt(fetch, "--topic", c.topic, "Topic name written to the topic column (default the query)");
    opt(fetch, "--from", c.from, "First year");
    opt(fetch, "--to", c.to, "Last year");
    opt(fetch, "--out", c.out, "patents.csv to create or extend");
    opt(fetch, "--endpoint", c.endpoint, "Search API endpoint");
    opt(fetch, "--api-key", c.api_key, "API key");
    opt(fetch, "--interval-ms", c.interval_ms, "Minimum milliseconds between requests");
    opt(fetch, "--retries", c.retries, "Retries per year after a failed request");

    auto* synth = app.add_subcommand("synth", "Write a synthetic corpus directory");
    opt(synth, "--kind", c.kind, "Generator")->check(CLI::IsMember({"leading", "persistent"}));
    opt(synth, "--topics", c.n_topics, "Number of topics");
    opt(synth, "--first-year", c.first_year, "First year");
    opt(synth, "--years", c.n_years, "Number of years");
    opt(synth, "--embedding-dim", c.embedding_dim, "Embedding dimension (leading generator)");
    opt(synth, "--seed", c.seed, "Random seed");
    opt(synth, "--out", c.out, "Output directory");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        print_error(err, "usage", e.what());
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kExitValidation;
    }

    try {
        if (*ingest) return cmd_ingest(c, out);
        if (*featurize) return cmd_featurize(c, out);
        if (*train) return cmd_train(c, out);
        if (*evaluate) return cmd_evaluate(c, out);
        if (*predict) return cmd_predict(c, out);
        if (*correlate) return cmd_correlate(c, out, corr_from->count() > 0 || corr_to->count() > 0);
        if (*importance) return cmd_importance(c, out);
        if (*movers) return cmd_rank_movers(c, out);
        if (*serve) return cmd_serve(c, out);
        if (*fetch) return cmd_fetch_patents(c, out);
        if (*synth) return cmd_synth(c, out);
    } catch (const IoError& e) {
        print_error(err, "io", e.what());
        return kExitIo;
    } catch (const ValidationError& e) {
        print_error(err, "validation", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        print_error(err, "validation", e.what());
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace trendcast::cli
