#pragma once

#include <chrono>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "trendcast/corpus.hpp"

namespace trendcast::patents {

struct FetchOptions {
    /// PatentsView-style search endpoint; one POST per year.
    std::string endpoint = "https://search.patentsview.org/api/v1/patent/";
    std::string api_key;  // sent as X-Api-Key when non-empty
    std::chrono::milliseconds min_interval{1000};
    int retries = 3;
    std::chrono::seconds timeout{30};
};

struct YearRange {
    int first = 0;
    int last = 0;
};

/// Request body for the patents matching query granted in year.
std::string request_body(const std::string& query, int year);

/// Hit count from a response body: total_hits, else count, else the size of the patents array.
/// An empty body or a response without any of those reads as zero.
std::int64_t parse_hit_count(const std::string& body);

/// One row per year in range, skipping years in `skip`. on_row runs as each year completes.
std::vector<corpus::PatentCount> fetch_patent_counts(
    const std::string& query, YearRange range, const FetchOptions& options = {}, const std::set<int>& skip = {},
    const std::function<void(const corpus::PatentCount&)>& on_row = {}, const std::string& topic = {});

/// Appends rows for the missing years to a patents.csv file, creating it when absent.
/// Years already present for the topic are not fetched again. Returns the number of rows added.
std::size_t fetch_patent_counts_to_file(const std::string& query, YearRange range, const std::string& path,
                                        const FetchOptions& options = {}, const std::string& topic = {});

}  // namespace trendcast::patents
