#include "trendcast/service.hpp"

#include <algorithm>
#include <filesystem>

#include <httplib.h>

#include "trendcast/error.hpp"
#include "trendcast/features.hpp"

namespace trendcast::service {

using nlohmann::json;
using models::TargetKind;

namespace {

json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

json error_body(const std::string& code, const std::string& detail = {}) {
    json body = {{"error", code}};
    if (!detail.empty()) body["detail"] = detail;
    return body;
}

json topic_json(const corpus::TopicRecord& rec) {
    const auto& m = rec.meta;
    json j = {
        {"topic_id", m.topic_id},
        {"display_name", m.display_name},
        {"first_occurrence_year", optional_int(m.first_occurrence_year)},
        {"first_valid_year", optional_int(m.first_valid_year)},
        {"training_start_year", optional_int(m.training_start_year)},
        {"has_embedding", m.has_embedding},
        {"first_year", rec.counts.begin()->first},
        {"last_year", rec.last_observed_year()},
    };
    j["domain_tag"] = m.domain_tag ? json(*m.domain_tag) : json(nullptr);
    return j;
}

}  // namespace

const models::Model& Registry::model(int horizon, TargetKind target) const {
    auto it = models.find({horizon, target});
    if (it == models.end()) {
        throw ValidationError("no " + models::to_string(target) + " model for horizon " + std::to_string(horizon));
    }
    return it->second;
}

Registry make_registry(std::shared_ptr<const corpus::CorpusStore> corpus,
                       std::map<std::pair<int, TargetKind>, models::Model> loaded) {
    if (!corpus) throw ValidationError("registry needs a corpus");
    Registry reg;
    reg.corpus = std::move(corpus);
    reg.models = std::move(loaded);

    const auto& emb = reg.corpus->embeddings();
    for (const auto& [key, model] : reg.models) {
        const auto [h, target] = key;
        if (h < features::kMinHorizon || h > features::kMaxHorizon) {
            throw ValidationError("model horizon " + std::to_string(h) + " outside [1,6]");
        }
        const auto& schema = models::schema_of(model);
        if (schema.embedding_dim > 0 && (!emb || emb->dim != schema.embedding_dim)) {
            throw ValidationError("model h" + std::to_string(h) + "_" + models::to_string(target) + " expects " +
                                  std::to_string(schema.embedding_dim) +
                                  "-dimensional embeddings the corpus does not provide");
        }
        if (!(schema == features::make_schema(schema.embedding_dim))) {
            throw ValidationError("model h" + std::to_string(h) + "_" + models::to_string(target) +
                                  " has an unrecognised feature schema");
        }
    }
    int h = 0;
    while (h < features::kMaxHorizon && reg.models.count({h + 1, TargetKind::kPop}) &&
           reg.models.count({h + 1, TargetKind::kPct})) {
        ++h;
    }
    if (h == 0) throw ValidationError("registry needs pop and pct models for horizon 1");
    for (const auto& [key, model] : reg.models) {
        if (key.first > h) {
            throw ValidationError("horizons must be contiguous from 1; horizon " + std::to_string(key.first) +
                                  " is registered but horizon " + std::to_string(h + 1) + " is incomplete");
        }
    }
    reg.max_horizon = h;
    return reg;
}

std::map<std::pair<int, TargetKind>, models::Model> load_models(const std::string& model_dir) {
    if (!std::filesystem::is_directory(model_dir)) throw IoError("model directory '" + model_dir + "' not found");
    std::map<std::pair<int, TargetKind>, models::Model> loaded;
    for (int h = features::kMinHorizon; h <= features::kMaxHorizon; ++h) {
        for (auto target : {TargetKind::kPop, TargetKind::kPct}) {
            const auto path = model_dir + "/" + models::model_file_name(h, target);
            if (!std::filesystem::exists(path)) continue;
            auto saved = models::load_model(path);
            if (saved.horizon != h || saved.target != target) {
                throw ValidationError(path + ": file holds a " + models::to_string(saved.target) +
                                      " model for horizon " + std::to_string(saved.horizon));
            }
            loaded.emplace(std::pair{h, target}, std::move(saved.model));
        }
    }
    return loaded;
}

Registry load_registry(const std::string& corpus_dir, const std::string& model_dir) {
    auto store = std::make_shared<const corpus::CorpusStore>(corpus::ingest(corpus::paths_in_directory(corpus_dir)));
    return make_registry(std::move(store), load_models(model_dir));
}

bool has_sufficient_history(const corpus::TopicRecord& topic) {
    return topic.meta.training_start_year.has_value() &&
           *topic.meta.training_start_year <= topic.last_observed_year();
}

Forecast compute_forecast(const Registry& registry, const corpus::TopicRecord& topic, int max_horizon) {
    if (max_horizon < features::kMinHorizon || max_horizon > registry.max_horizon) {
        throw ValidationError("horizon must be in [1," + std::to_string(registry.max_horizon) + "]");
    }
    Forecast out;
    out.topic_id = topic.meta.topic_id;
    out.base_year = topic.last_observed_year();
    for (int h = 1; h <= max_horizon; ++h) {
        auto predict_one = [&](TargetKind target) {
            const auto& model = registry.model(h, target);
            features::FeatureTable table;
            table.schema = models::schema_of(model);
            table.rows.push_back(
                features::build_feature_row(*registry.corpus, topic, out.base_year, h, table.schema.embedding_dim));
            return models::predict(model, table).front();
        };
        HorizonForecast f;
        f.horizon = h;
        f.year = out.base_year + h;
        f.raw = predict_one(TargetKind::kPop);
        f.popularity = std::max(f.raw, 0.0);
        f.pct_change = predict_one(TargetKind::kPct);
        f.up = f.pct_change > 0.0;
        out.horizons.push_back(f);
    }
    return out;
}

json history_json(const corpus::CorpusStore& store, const corpus::TopicRecord& topic, std::size_t tail) {
    json points = json::array();
    auto it = topic.popularity.begin();
    if (tail > 0 && topic.popularity.size() > tail) std::advance(it, topic.popularity.size() - tail);
    for (; it != topic.popularity.end(); ++it) {
        const auto& [year, pt] = *it;
        points.push_back({
            {"year", year},
            {"popularity", pt.popularity},
            {"review_popularity", pt.review_popularity},
            {"research_popularity", pt.research_popularity},
            {"patent_count", store.patents_at(topic, year)},
        });
    }
    return points;
}

json forecast_json(const Forecast& forecast) {
    json horizons = json::array();
    for (const auto& h : forecast.horizons) {
        horizons.push_back({
            {"horizon", h.horizon},
            {"year", h.year},
            {"popularity", h.popularity},
            {"raw", h.raw},
            {"pct_change", h.pct_change},
            {"direction", h.up ? "up" : "down"},
        });
    }
    return {{"topic_id", forecast.topic_id}, {"base_year", forecast.base_year}, {"horizons", horizons}};
}

json forecast_entry(const Registry& registry, const std::string& topic, int max_horizon) {
    const auto* rec = registry.corpus->find(topic);
    if (!rec) return {{"topic", topic}, {"error", "unknown_topic"}};
    if (!has_sufficient_history(*rec)) return {{"topic", topic}, {"error", "insufficient_history"}};
    return {
        {"topic", topic},
        {"display_name", rec->meta.display_name},
        {"history", history_json(*registry.corpus, *rec, kHistoryTail)},
        {"forecast", forecast_json(compute_forecast(registry, *rec, max_horizon))},
    };
}

json forecast_batch(const Registry& registry, const std::vector<std::string>& topics, int max_horizon) {
    json results = json::array();
    for (const auto& t : topics) results.push_back(forecast_entry(registry, t, max_horizon));
    return {{"max_horizon", max_horizon}, {"results", results}};
}

ForecastService::ForecastService(std::shared_ptr<const Registry> registry) : registry_(std::move(registry)) {
    if (!registry_) throw ValidationError("service needs a registry");
}

std::shared_ptr<const Registry> ForecastService::snapshot() const {
    std::lock_guard lock(mutex_);
    return registry_;
}

void ForecastService::replace(std::shared_ptr<const Registry> registry) {
    if (!registry) throw ValidationError("service needs a registry");
    std::lock_guard lock(mutex_);
    registry_ = std::move(registry);
}

Response ForecastService::health() const { return {200, {{"status", "ok"}}}; }

Response ForecastService::topics() const {
    const auto reg = snapshot();
    std::vector<const corpus::TopicRecord*> recs;
    for (const auto& [id, rec] : reg->corpus->topics()) recs.push_back(&rec);
    std::stable_sort(recs.begin(), recs.end(), [](const auto* a, const auto* b) {
        return a->meta.display_name < b->meta.display_name;
    });
    json list = json::array();
    for (const auto* rec : recs) list.push_back(topic_json(*rec));
    return {200, list};
}

Response ForecastService::history(const std::string& topic) const {
    const auto reg = snapshot();
    const auto* rec = reg->corpus->find(topic);
    if (!rec) return {404, {{"error", "unknown_topic"}, {"topic", topic}}};
    return {200,
            {{"topic_id", rec->meta.topic_id},
             {"display_name", rec->meta.display_name},
             {"history", history_json(*reg->corpus, *rec)}}};
}

Response ForecastService::forecast(const std::string& request_body) const {
    const auto reg = snapshot();
    json req = json::parse(request_body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return {400, error_body("malformed_request", "body is not a JSON object")};
    if (!req.contains("topics") || !req["topics"].is_array()) {
        return {400, error_body("malformed_request", "'topics' must be an array of strings")};
    }
    const auto& topics = req["topics"];
    for (const auto& t : topics) {
        if (!t.is_string()) return {400, error_body("malformed_request", "'topics' must be an array of strings")};
    }
    if (topics.size() > kMaxTopicsPerRequest) {
        return {400, error_body("too_many_topics", "at most " + std::to_string(kMaxTopicsPerRequest) +
                                                       " topics per request")};
    }
    int max_horizon = reg->max_horizon;
    if (req.contains("max_horizon")) {
        const auto& h = req["max_horizon"];
        if (!h.is_number_integer()) return {400, error_body("malformed_request", "'max_horizon' must be an integer")};
        max_horizon = h.get<int>();
        if (max_horizon < features::kMinHorizon || max_horizon > features::kMaxHorizon) {
            return {400, error_body("invalid_horizon", "max_horizon must be in [1,6]")};
        }
        if (max_horizon > reg->max_horizon) {
            return {400, error_body("invalid_horizon", "models are loaded for horizons 1.." +
                                                           std::to_string(reg->max_horizon))};
        }
    }
    return {200, forecast_batch(*reg, topics.get<std::vector<std::string>>(), max_horizon)};
}

HttpServer::HttpServer(ForecastService& service, ServerConfig config)
    : service_(service), config_(std::move(config)), server_(std::make_unique<httplib::Server>()) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json; charset=utf-8");
    };
    server_->Get("/health", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.health());
    });
    server_->Get("/topics", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.topics());
    });
    server_->Get(R"(/topics/([^/]+)/history)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.history(req.matches[1].str()));
    });
    server_->Post("/forecast", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.forecast(req.body));
    });
    server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "unknown error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(error_body("internal", what).dump(), "application/json; charset=utf-8");
    });
    if (config_.static_dir && !server_->set_mount_point("/app", *config_.static_dir)) {
        throw IoError("static directory '" + *config_.static_dir + "' not found");
    }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    int port = config_.port;
    if (port == 0) {
        port = server_->bind_to_any_port(config_.host);
    } else if (!server_->bind_to_port(config_.host, port)) {
        port = -1;
    }
    if (port < 0) throw IoError("cannot bind " + config_.host + ":" + std::to_string(config_.port));
    config_.port = port;
    return port;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
    if (server_ && server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace trendcast::service
