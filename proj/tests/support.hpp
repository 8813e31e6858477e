#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

#include "trendcast/corpus.hpp"
#include "trendcast/features.hpp"

namespace testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("trendcast-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Globals for [first, last] with a fixed medline total and patents total.
inline std::vector<trendcast::corpus::GlobalYearStats> flat_globals(int first, int last,
                                                                    std::int64_t medline = 100000,
                                                                    std::int64_t patents_total = 1000) {
    std::vector<trendcast::corpus::GlobalYearStats> g;
    for (int y = first; y <= last; ++y) g.push_back({y, medline, 0.4, patents_total});
    return g;
}

/// Adds one topic with publications[y] (reviews = floor(pubs * review_share)) for each year in the map.
inline void add_topic(trendcast::corpus::CorpusData& data, const std::string& name,
                      const std::map<int, std::int64_t>& pubs, double review_share = 0.2) {
    for (const auto& [year, n] : pubs) {
        data.counts.push_back({name, year, n, static_cast<std::int64_t>(static_cast<double>(n) * review_share), 0});
    }
}

/// Random corpus with gaps, varying totals, patents and optional embeddings.
inline trendcast::corpus::CorpusData random_corpus(std::mt19937_64& rng, std::size_t n_topics, int first_year,
                                                   int last_year, std::size_t embedding_dim = 0) {
    trendcast::corpus::CorpusData data;
    std::uniform_int_distribution<std::int64_t> medline(50000, 900000);
    for (int y = first_year; y <= last_year; ++y) {
        data.globals.push_back({y, medline(rng), std::uniform_real_distribution<double>(0.2, 0.6)(rng),
                                std::uniform_int_distribution<std::int64_t>(0, 5000)(rng)});
    }
    std::bernoulli_distribution active(0.8);
    std::uniform_int_distribution<std::int64_t> count(0, 400);
    std::uniform_int_distribution<int> start(first_year, last_year);
    if (embedding_dim > 0) data.embeddings = trendcast::corpus::EmbeddingTable{embedding_dim, {}};
    for (std::size_t i = 0; i < n_topics; ++i) {
        const std::string name = "Topic " + std::to_string(i);
        const int from = start(rng);
        for (int y = from; y <= last_year; ++y) {
            if (!active(rng)) continue;
            const auto n = count(rng);
            const auto r = std::uniform_int_distribution<std::int64_t>(0, n)(rng);
            data.counts.push_back({name, y, n, r, 0});
            if (std::bernoulli_distribution(0.5)(rng)) {
                data.patents.push_back({name, y, std::uniform_int_distribution<std::int64_t>(0, 60)(rng)});
            }
        }
        if (embedding_dim > 0 && std::bernoulli_distribution(0.8)(rng)) {
            std::vector<double> v(embedding_dim);
            for (auto& x : v) x = std::normal_distribution<double>()(rng);
            data.embeddings->vectors[name] = v;
        }
    }
    return data;
}

/// Feature table over arbitrary numeric columns x0, x1, ... with topics cycling over n_topics.
inline trendcast::features::FeatureTable numeric_table(const std::vector<std::vector<double>>& x,
                                                       std::size_t n_topics = 5) {
    trendcast::features::FeatureTable t;
    const std::size_t cols = x.empty() ? 0 : x.front().size();
    for (std::size_t c = 0; c < cols; ++c) t.schema.names.push_back("x" + std::to_string(c));
    for (std::size_t i = 0; i < x.size(); ++i) {
        trendcast::features::FeatureRow r;
        r.topic_id = "t" + std::to_string(i % n_topics);
        r.base_year = 1979 + static_cast<int>(i / n_topics);
        r.values = x[i];
        t.rows.push_back(std::move(r));
    }
    return t;
}

}  // namespace testing
