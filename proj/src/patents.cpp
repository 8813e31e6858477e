#include "trendcast/patents.hpp"

#include <filesystem>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::patents {

using nlohmann::json;

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme = url.find("://");
    if (scheme == std::string::npos) throw ValidationError("endpoint '" + url + "' has no scheme");
    const auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

void validate(const std::string& query, YearRange range) {
    if (corpus::canonical_topic_id(query).empty()) throw ValidationError("query must not be empty");
    if (range.first > range.last) {
        throw ValidationError("year range is reversed: " + std::to_string(range.first) + " > " +
                              std::to_string(range.last));
    }
    if (range.first < corpus::kEarliestYear || range.last > corpus::kLatestYear) {
        throw ValidationError("years must be in [" + std::to_string(corpus::kEarliestYear) + "," +
                              std::to_string(corpus::kLatestYear) + "]");
    }
}

}  // namespace

std::string request_body(const std::string& query, int year) {
    const auto y = std::to_string(year);
    json q = {{"_and",
               {{{"_text_any", {{"patent_abstract", query}}}},
                {{"_gte", {{"patent_date", y + "-01-01"}}}},
                {{"_lte", {{"patent_date", y + "-12-31"}}}}}}};
    return json{{"q", q}, {"f", {"patent_id"}}, {"o", {{"size", 1}}}}.dump();
}

std::int64_t parse_hit_count(const std::string& body) {
    if (body.find_first_not_of(" \t\r\n") == std::string::npos) return 0;
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) throw IoError("patent API returned malformed JSON");
    if (!doc.is_object()) return 0;
    for (const char* key : {"total_hits", "count"}) {
        if (doc.contains(key) && doc[key].is_number_integer()) return doc[key].get<std::int64_t>();
    }
    if (doc.contains("patents") && doc["patents"].is_array()) return static_cast<std::int64_t>(doc["patents"].size());
    return 0;
}

std::vector<corpus::PatentCount> fetch_patent_counts(const std::string& query, YearRange range,
                                                     const FetchOptions& options, const std::set<int>& skip,
                                                     const std::function<void(const corpus::PatentCount&)>& on_row,
                                                     const std::string& topic) {
    validate(query, range);
    const auto ep = split_endpoint(options.endpoint);
    httplib::Client client(ep.origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    httplib::Headers headers;
    if (!options.api_key.empty()) headers.emplace("X-Api-Key", options.api_key);

    using clock = std::chrono::steady_clock;
    std::optional<clock::time_point> last_request;
    auto send = [&](const std::string& body) {
        if (last_request) std::this_thread::sleep_until(*last_request + options.min_interval);
        last_request = clock::now();
        return client.Post(ep.path, headers, body, "application/json");
    };

    std::vector<corpus::PatentCount> rows;
    for (int year = range.first; year <= range.last; ++year) {
        if (skip.count(year)) continue;
        const auto body = request_body(query, year);
        std::string last_status;
        std::optional<std::int64_t> hits;
        for (int attempt = 0; attempt <= options.retries && !hits; ++attempt) {
            auto res = send(body);
            if (!res) {
                last_status = httplib::to_string(res.error());
            } else if (res->status != 200) {
                last_status = "HTTP " + std::to_string(res->status);
            } else {
                hits = parse_hit_count(res->body);
            }
        }
        if (!hits) {
            throw IoError("patent request for " + std::to_string(year) + " failed after " +
                          std::to_string(options.retries + 1) + " attempts: " + last_status);
        }
        rows.push_back({topic.empty() ? query : topic, year, *hits});
        if (on_row) on_row(rows.back());
    }
    return rows;
}

std::size_t fetch_patent_counts_to_file(const std::string& query, YearRange range, const std::string& path,
                                        const FetchOptions& options, const std::string& topic) {
    validate(query, range);
    const std::string label = topic.empty() ? query : topic;
    const auto id = corpus::canonical_topic_id(label);
    std::set<int> done;
    const bool exists = std::filesystem::exists(path);
    if (exists) {
        const auto table = csv::read_file(path);
        if (table.header != std::vector<std::string>{"topic", "year", "patent_count"}) {
            throw IngestError(path, 1, 1, "expected header topic,year,patent_count");
        }
        for (const auto& rec : table.records) {
            if (rec.fields.size() != 3) throw IngestError(path, rec.line, 1, "expected 3 fields");
            if (corpus::canonical_topic_id(rec.fields[0]) != id) continue;
            const auto year = csv::parse_int(rec.fields[1]);
            if (!year) throw IngestError(path, rec.line, 2, "'" + rec.fields[1] + "' is not a year");
            done.insert(static_cast<int>(*year));
        }
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw IoError("cannot write '" + path + "'");
    if (!exists) out << "topic,year,patent_count\n" << std::flush;
    std::size_t added = 0;
    fetch_patent_counts(query, range, options, done,
                        [&](const corpus::PatentCount& row) {
                            out << csv::quote(row.topic_id) << ',' << row.year << ',' << row.patent_count << '\n'
                                << std::flush;
                            if (!out) throw IoError("cannot write '" + path + "'");
                            ++added;
                        },
                        label);
    return added;
}

}  // namespace trendcast::patents
