#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "trendcast/corpus.hpp"
#include "trendcast/model.hpp"

namespace httplib {
class Server;
}

namespace trendcast::service {

inline constexpr std::size_t kMaxTopicsPerRequest = 10;
inline constexpr std::size_t kHistoryTail = 10;

/// Immutable snapshot: one corpus plus per-(horizon, target) models for horizons 1..max_horizon.
struct Registry {
    std::shared_ptr<const corpus::CorpusStore> corpus;
    std::map<std::pair<int, models::TargetKind>, models::Model> models;
    int max_horizon = 0;

    const models::Model& model(int horizon, models::TargetKind target) const;
};

/// Checks horizon contiguity, target coverage and schema compatibility with the corpus, and sets max_horizon.
Registry make_registry(std::shared_ptr<const corpus::CorpusStore> corpus,
                       std::map<std::pair<int, models::TargetKind>, models::Model> models);

/// Loads every h{h}_{pop|pct}.json found in model_dir, checking each file's own horizon and target.
std::map<std::pair<int, models::TargetKind>, models::Model> load_models(const std::string& model_dir);

/// Ingests corpus_dir and loads every h{h}_{pop|pct}.json found in model_dir.
Registry load_registry(const std::string& corpus_dir, const std::string& model_dir);

struct HorizonForecast {
    int horizon = 0;
    int year = 0;
    double popularity = 0.0;  // clamped at zero
    double raw = 0.0;         // unclamped pop-model output
    double pct_change = 0.0;
    bool up = false;
};

struct Forecast {
    std::string topic_id;
    int base_year = 0;
    std::vector<HorizonForecast> horizons;
};

/// True when the topic has a training start year, i.e. enough history to build meaningful features.
bool has_sufficient_history(const corpus::TopicRecord& topic);

/// Direct per-horizon forecasts from the topic's last observed year.
Forecast compute_forecast(const Registry& registry, const corpus::TopicRecord& topic, int max_horizon);

nlohmann::json history_json(const corpus::CorpusStore& store, const corpus::TopicRecord& topic,
                            std::size_t tail = 0);
nlohmann::json forecast_json(const Forecast& forecast);

/// One entry of a forecast batch: either a forecast with its history tail or an inline error.
nlohmann::json forecast_entry(const Registry& registry, const std::string& topic, int max_horizon);

/// {"max_horizon": H, "results": [...]} for a list of requested topics.
nlohmann::json forecast_batch(const Registry& registry, const std::vector<std::string>& topics, int max_horizon);

struct Response {
    int status = 200;
    nlohmann::json body;
};

/// Request handlers over an atomically replaceable registry.
class ForecastService {
public:
    explicit ForecastService(std::shared_ptr<const Registry> registry);

    std::shared_ptr<const Registry> snapshot() const;
    void replace(std::shared_ptr<const Registry> registry);

    Response health() const;
    Response topics() const;
    Response history(const std::string& topic) const;
    Response forecast(const std::string& request_body) const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const Registry> registry_;
};

struct ServerConfig {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::optional<std::string> static_dir;  // mounted under /app
};

/// cpp-httplib front end for a ForecastService.
class HttpServer {
public:
    HttpServer(ForecastService& service, ServerConfig config);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; port 0 picks a free port. Returns the bound port.
    int bind();
    /// Serves until stop() is called. Requires bind().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    ForecastService& service_;
    ServerConfig config_;
    std::unique_ptr<httplib::Server> server_;
};

}  // namespace trendcast::service
