#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendcast::corpus {

inline constexpr int kEarliestYear = 1946;
inline constexpr int kLatestYear = 2035;
/// First year of the modern (patent-covered) era used for training.
inline constexpr int kModernEraStart = 1979;
/// Popularity is expressed per this many indexed publications.
inline constexpr double kPopularityScale = 100000.0;

struct YearlyTopicCount {
    std::string topic_id;
    int year = 0;
    std::int64_t publications = 0;
    std::int64_t review_publications = 0;
    std::int64_t patent_count = 0;

    std::int64_t research_publications() const { return publications - review_publications; }
};

struct GlobalYearStats {
    int year = 0;
    std::int64_t medline_total = 0;
    double us_publication_fraction = 0.0;
    std::int64_t patents_total = 0;
};

struct PatentCount {
    std::string topic_id;
    int year = 0;
    std::int64_t patent_count = 0;
};

struct TopicMeta {
    std::string topic_id;
    std::string display_name;
    std::optional<std::string> domain_tag;
    std::optional<int> first_occurrence_year;
    std::optional<int> first_valid_year;
    std::optional<int> training_start_year;
    bool has_embedding = false;
};

struct PopularityPoint {
    std::string topic_id;
    int year = 0;
    double popularity = 0.0;
    double review_popularity = 0.0;
    double research_popularity = 0.0;
};

struct EmbeddingTable {
    std::size_t dim = 0;
    std::map<std::string, std::vector<double>> vectors;

    const std::vector<double>* find(const std::string& topic_id) const;
};

/// Which years count toward the "4 of the past 5 years" activity test used for the training start.
enum class StartWindow {
    kIncludeCurrent,  // [y-4, y]
    kPrecedingOnly,   // [y-5, y-1]
};

/// Publications per year for one topic. Years without an entry count as zero.
using YearSeries = std::map<int, std::int64_t>;

/// 100000 * count / total. Throws ValidationError when total is not positive.
double popularity(std::int64_t count, std::int64_t total);

/// Lowercased, trimmed, internal whitespace collapsed to single spaces.
std::string canonical_topic_id(std::string_view name);

std::optional<int> first_occurrence_year(const YearSeries& series);
std::optional<int> first_valid_year(const YearSeries& series);
std::optional<int> training_start_year(const YearSeries& series, StartWindow window = StartWindow::kIncludeCurrent);

/// Unvalidated input records. CorpusStore is built from one of these.
struct CorpusData {
    std::vector<YearlyTopicCount> counts;  // display names allowed in topic_id; canonicalized on build
    std::vector<GlobalYearStats> globals;
    std::vector<PatentCount> patents;
    std::optional<EmbeddingTable> embeddings;
};

struct TopicRecord {
    TopicMeta meta;
    std::map<int, YearlyTopicCount> counts;
    std::map<int, std::int64_t> patents;
    std::map<int, PopularityPoint> popularity;

    int last_observed_year() const { return counts.rbegin()->first; }
    YearSeries publication_series() const;
};

/// Validated, immutable corpus snapshot.
class CorpusStore {
public:
    CorpusStore() = default;
    explicit CorpusStore(CorpusData data, StartWindow window = StartWindow::kIncludeCurrent);

    const std::map<std::string, TopicRecord>& topics() const { return topics_; }
    const TopicRecord* find(const std::string& topic_id) const;
    const GlobalYearStats* global(int year) const;
    const std::map<int, GlobalYearStats>& globals() const { return globals_; }
    const std::optional<EmbeddingTable>& embeddings() const { return embeddings_; }
    const CorpusData& raw() const { return raw_; }
    StartWindow start_window() const { return window_; }

    /// Zero-count convention: a missing (topic, year) row reads as zero.
    double popularity_at(const TopicRecord& topic, int year) const;
    double review_popularity_at(const TopicRecord& topic, int year) const;
    double research_popularity_at(const TopicRecord& topic, int year) const;
    std::int64_t patents_at(const TopicRecord& topic, int year) const;

    /// Latest year with any topic record; 0 for an empty corpus.
    int last_year() const { return last_year_; }
    std::vector<std::string> topics_missing_embeddings() const;

private:
    CorpusData raw_;
    StartWindow window_ = StartWindow::kIncludeCurrent;
    std::map<std::string, TopicRecord> topics_;
    std::map<int, GlobalYearStats> globals_;
    std::optional<EmbeddingTable> embeddings_;
    int last_year_ = 0;
};

struct IngestPaths {
    std::string counts;
    std::string global;
    std::string patents;
    std::optional<std::string> embeddings;
};

/// Reads and validates the four input files. Errors name file, line and column.
CorpusStore ingest(const IngestPaths& paths, StartWindow window = StartWindow::kIncludeCurrent);

/// Conventional file names inside a corpus directory; embeddings.csv is used when it exists.
IngestPaths paths_in_directory(const std::string& dir);

/// Canonical topic_counts.csv: sorted by topic_id then year, display names in the topic column.
void write_counts_csv(const CorpusStore& store, std::ostream& out);
/// topic,year,popularity,review_popularity,research_popularity,patent_count
void write_popularity_csv(const CorpusStore& store, std::ostream& out);
/// topic,display_name,first_occurrence_year,first_valid_year,training_start_year,has_embedding
void write_topics_csv(const CorpusStore& store, std::ostream& out);

/// Validated records in canonical order, display names in topic columns, orphan patent rows dropped.
CorpusData snapshot_data(const CorpusStore& store);
/// Writes topic_counts.csv, global_stats.csv, patents.csv and (if present) embeddings.csv into dir.
void write_corpus_directory(const CorpusData& data, const std::string& dir);

/// Mean popularity over topics that have a record in each year.
std::map<int, double> mean_popularity_by_year(const CorpusStore& store);

}  // namespace trendcast::corpus
