#include "trendcast/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::corpus {

namespace {

int count_active(const YearSeries& series, int from, int to) {
    int n = 0;
    for (auto it = series.lower_bound(from); it != series.end() && it->first <= to; ++it) {
        if (it->second > 0) ++n;
    }
    return n;
}

void check_year(int year, const std::string& what) {
    if (year < kEarliestYear || year > kLatestYear) {
        throw ValidationError(what + ": year " + std::to_string(year) + " outside [" +
                              std::to_string(kEarliestYear) + ", " + std::to_string(kLatestYear) + "]");
    }
}

void expect_header(const csv::Table& table, const std::vector<std::string>& expected) {
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= table.header.size() || table.header[i] != expected[i]) {
            throw IngestError(table.source, 1, i + 1, "expected column '" + expected[i] + "'");
        }
    }
    if (table.header.size() != expected.size()) {
        throw IngestError(table.source, 1, expected.size() + 1, "unexpected extra column");
    }
}

class RowReader {
public:
    RowReader(const csv::Table& table, const csv::Record& rec) : table_(table), rec_(rec) {
        if (rec.fields.size() != table.header.size()) {
            throw IngestError(table.source, rec.line, std::min(rec.fields.size(), table.header.size()) + 1,
                              "expected " + std::to_string(table.header.size()) + " fields, found " +
                                  std::to_string(rec.fields.size()));
        }
    }

    [[noreturn]] void fail(std::size_t col, const std::string& what) const {
        throw IngestError(table_.source, rec_.line, col + 1, what);
    }

    std::string text(std::size_t col) const {
        std::string t = rec_.fields[col];
        if (canonical_topic_id(t).empty()) fail(col, "empty " + table_.header[col]);
        return t;
    }

    std::int64_t non_negative(std::size_t col) const {
        auto v = csv::parse_int(rec_.fields[col]);
        if (!v) fail(col, "'" + rec_.fields[col] + "' is not an integer " + table_.header[col]);
        if (*v < 0) fail(col, table_.header[col] + " must be non-negative");
        return *v;
    }

    int year(std::size_t col) const {
        const auto& f = rec_.fields[col];
        auto v = csv::parse_int(f);
        if (!v || f.size() != 4) fail(col, "'" + f + "' is not a 4-digit year");
        if (*v < kEarliestYear || *v > kLatestYear) fail(col, "year " + f + " out of range");
        return static_cast<int>(*v);
    }

    double real(std::size_t col) const {
        auto v = csv::parse_double(rec_.fields[col]);
        if (!v || !std::isfinite(*v)) fail(col, "'" + rec_.fields[col] + "' is not a finite number");
        return *v;
    }

private:
    const csv::Table& table_;
    const csv::Record& rec_;
};

}  // namespace

const std::vector<double>* EmbeddingTable::find(const std::string& topic_id) const {
    auto it = vectors.find(topic_id);
    return it == vectors.end() ? nullptr : &it->second;
}

double popularity(std::int64_t count, std::int64_t total) {
    if (total <= 0) throw ValidationError("popularity denominator must be positive");
    return kPopularityScale * static_cast<double>(count) / static_cast<double>(total);
}

std::string canonical_topic_id(std::string_view name) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : name) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::optional<int> first_occurrence_year(const YearSeries& series) {
    for (auto it = series.lower_bound(kEarliestYear); it != series.end(); ++it) {
        if (it->second > 0) return it->first;
    }
    return std::nullopt;
}

std::optional<int> first_valid_year(const YearSeries& series) {
    for (auto it = series.lower_bound(kEarliestYear); it != series.end(); ++it) {
        const int y = it->first;
        if (it->second > 0 && count_active(series, std::max(y - 5, kEarliestYear), y - 1) >= 4) return y;
    }
    return std::nullopt;
}

std::optional<int> training_start_year(const YearSeries& series, StartWindow window) {
    const auto valid = first_valid_year(series);
    if (!valid || series.empty()) return std::nullopt;
    const int last = series.rbegin()->first;
    const int lo_off = window == StartWindow::kIncludeCurrent ? 4 : 5;
    const int hi_off = window == StartWindow::kIncludeCurrent ? 0 : 1;
    for (int y = std::max(kModernEraStart, *valid); y <= last; ++y) {
        const bool recent = count_active(series, std::max(y - lo_off, kEarliestYear), y - hi_off) >= 4;
        if (recent && count_active(series, kModernEraStart, y) >= 5) return y;
    }
    return std::nullopt;
}

YearSeries TopicRecord::publication_series() const {
    YearSeries s;
    for (const auto& [year, c] : counts) s[year] = c.publications;
    return s;
}

CorpusStore::CorpusStore(CorpusData data, StartWindow window) : raw_(std::move(data)), window_(window) {
    for (const auto& g : raw_.globals) {
        check_year(g.year, "global_stats");
        if (g.medline_total <= 0) {
            throw ValidationError("global_stats: medline_total for " + std::to_string(g.year) + " must be positive");
        }
        if (!(g.us_publication_fraction >= 0.0 && g.us_publication_fraction <= 1.0)) {
            throw ValidationError("global_stats: us_publication_fraction for " + std::to_string(g.year) +
                                  " outside [0, 1]");
        }
        if (g.patents_total < 0) throw ValidationError("global_stats: negative patents_total");
        if (!globals_.emplace(g.year, g).second) {
            throw ValidationError("global_stats: duplicate year " + std::to_string(g.year));
        }
    }

    for (const auto& c : raw_.counts) {
        const std::string id = canonical_topic_id(c.topic_id);
        if (id.empty()) throw ValidationError("topic_counts: empty topic");
        const std::string where = "topic_counts (" + id + ", " + std::to_string(c.year) + ")";
        check_year(c.year, where);
        if (c.publications < 0 || c.review_publications < 0) throw ValidationError(where + ": negative count");
        if (c.review_publications > c.publications) {
            throw ValidationError(where + ": review_publications exceeds publications");
        }
        auto g = globals_.find(c.year);
        if (g == globals_.end()) throw ValidationError(where + ": no global_stats row for denominator year");

        auto [it, fresh] = topics_.try_emplace(id);
        TopicRecord& rec = it->second;
        if (fresh) {
            rec.meta.topic_id = id;
            std::string_view name = c.topic_id;
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.remove_prefix(1);
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
            rec.meta.display_name = std::string(name);
        }
        YearlyTopicCount stored = c;
        stored.topic_id = id;
        stored.patent_count = 0;
        if (!rec.counts.emplace(c.year, stored).second) throw ValidationError(where + ": duplicate record");
        last_year_ = std::max(last_year_, c.year);
    }

    std::set<std::pair<std::string, int>> seen_patents;
    for (const auto& p : raw_.patents) {
        const std::string id = canonical_topic_id(p.topic_id);
        check_year(p.year, "patents");
        if (p.patent_count < 0) throw ValidationError("patents: negative count for " + id);
        if (!seen_patents.emplace(id, p.year).second) {
            throw ValidationError("patents: duplicate record (" + id + ", " + std::to_string(p.year) + ")");
        }
        auto it = topics_.find(id);
        if (it == topics_.end()) continue;
        it->second.patents[p.year] = p.patent_count;
        if (auto c = it->second.counts.find(p.year); c != it->second.counts.end()) c->second.patent_count = p.patent_count;
    }

    if (raw_.embeddings) {
        EmbeddingTable table;
        table.dim = raw_.embeddings->dim;
        if (table.dim == 0) throw ValidationError("embeddings: dimension must be positive");
        for (const auto& [name, vec] : raw_.embeddings->vectors) {
            if (vec.size() != table.dim) throw ValidationError("embeddings: wrong dimension for '" + name + "'");
            for (double v : vec) {
                if (!std::isfinite(v)) throw ValidationError("embeddings: non-finite entry for '" + name + "'");
            }
            table.vectors[canonical_topic_id(name)] = vec;
        }
        embeddings_ = std::move(table);
    }

    for (auto& [id, rec] : topics_) {
        for (const auto& [year, c] : rec.counts) {
            const auto total = globals_.at(year).medline_total;
            PopularityPoint pt;
            pt.topic_id = id;
            pt.year = year;
            pt.popularity = popularity(c.publications, total);
            pt.review_popularity = popularity(c.review_publications, total);
            pt.research_popularity = popularity(c.research_publications(), total);
            rec.popularity.emplace(year, pt);
        }
        const auto series = rec.publication_series();
        rec.meta.first_occurrence_year = first_occurrence_year(series);
        rec.meta.first_valid_year = first_valid_year(series);
        rec.meta.training_start_year = training_start_year(series, window_);
        rec.meta.has_embedding = embeddings_ && embeddings_->find(id) != nullptr;
    }
}

const TopicRecord* CorpusStore::find(const std::string& topic_id) const {
    auto it = topics_.find(canonical_topic_id(topic_id));
    return it == topics_.end() ? nullptr : &it->second;
}

const GlobalYearStats* CorpusStore::global(int year) const {
    auto it = globals_.find(year);
    return it == globals_.end() ? nullptr : &it->second;
}

double CorpusStore::popularity_at(const TopicRecord& topic, int year) const {
    auto it = topic.popularity.find(year);
    return it == topic.popularity.end() ? 0.0 : it->second.popularity;
}

double CorpusStore::review_popularity_at(const TopicRecord& topic, int year) const {
    auto it = topic.popularity.find(year);
    return it == topic.popularity.end() ? 0.0 : it->second.review_popularity;
}

double CorpusStore::research_popularity_at(const TopicRecord& topic, int year) const {
    auto it = topic.popularity.find(year);
    return it == topic.popularity.end() ? 0.0 : it->second.research_popularity;
}

std::int64_t CorpusStore::patents_at(const TopicRecord& topic, int year) const {
    auto it = topic.patents.find(year);
    return it == topic.patents.end() ? 0 : it->second;
}

std::vector<std::string> CorpusStore::topics_missing_embeddings() const {
    std::vector<std::string> out;
    if (!embeddings_) return out;
    for (const auto& [id, rec] : topics_) {
        if (!rec.meta.has_embedding) out.push_back(id);
    }
    return out;
}

CorpusStore ingest(const IngestPaths& paths, StartWindow window) {
    CorpusData data;

    const auto global = csv::read_file(paths.global);
    expect_header(global, {"year", "medline_total", "us_publication_fraction", "patents_total"});
    std::set<int> global_years;
    for (const auto& rec : global.records) {
        RowReader r(global, rec);
        GlobalYearStats g;
        g.year = r.year(0);
        g.medline_total = r.non_negative(1);
        if (g.medline_total == 0) r.fail(1, "medline_total must be positive");
        g.us_publication_fraction = r.real(2);
        if (g.us_publication_fraction < 0.0 || g.us_publication_fraction > 1.0) {
            r.fail(2, "us_publication_fraction outside [0, 1]");
        }
        g.patents_total = r.non_negative(3);
        if (!global_years.insert(g.year).second) r.fail(0, "duplicate year " + std::to_string(g.year));
        data.globals.push_back(g);
    }

    const auto counts = csv::read_file(paths.counts);
    expect_header(counts, {"topic", "year", "publications", "review_publications"});
    std::set<std::pair<std::string, int>> seen;
    for (const auto& rec : counts.records) {
        RowReader r(counts, rec);
        YearlyTopicCount c;
        c.topic_id = r.text(0);
        c.year = r.year(1);
        c.publications = r.non_negative(2);
        c.review_publications = r.non_negative(3);
        if (c.review_publications > c.publications) r.fail(3, "review_publications exceeds publications");
        if (!seen.emplace(canonical_topic_id(c.topic_id), c.year).second) {
            r.fail(0, "duplicate (topic, year) record");
        }
        if (!global_years.count(c.year)) {
            r.fail(1, "no global_stats row for year " + std::to_string(c.year) + " (missing denominator)");
        }
        data.counts.push_back(std::move(c));
    }

    const auto patents = csv::read_file(paths.patents);
    expect_header(patents, {"topic", "year", "patent_count"});
    std::set<std::pair<std::string, int>> seen_patents;
    for (const auto& rec : patents.records) {
        RowReader r(patents, rec);
        PatentCount p;
        p.topic_id = r.text(0);
        p.year = r.year(1);
        p.patent_count = r.non_negative(2);
        if (!seen_patents.emplace(canonical_topic_id(p.topic_id), p.year).second) {
            r.fail(0, "duplicate (topic, year) record");
        }
        data.patents.push_back(std::move(p));
    }

    if (paths.embeddings) {
        const auto emb = csv::read_file(*paths.embeddings);
        if (emb.header.size() < 2 || emb.header[0] != "topic") {
            throw IngestError(emb.source, 1, 1, "expected header topic,e0,e1,...");
        }
        EmbeddingTable table;
        table.dim = emb.header.size() - 1;
        for (std::size_t i = 0; i < table.dim; ++i) {
            if (emb.header[i + 1] != "e" + std::to_string(i)) {
                throw IngestError(emb.source, 1, i + 2, "expected column 'e" + std::to_string(i) + "'");
            }
        }
        for (const auto& rec : emb.records) {
            RowReader r(emb, rec);
            const std::string id = canonical_topic_id(r.text(0));
            std::vector<double> vec(table.dim);
            for (std::size_t i = 0; i < table.dim; ++i) vec[i] = r.real(i + 1);
            if (!table.vectors.emplace(id, std::move(vec)).second) r.fail(0, "duplicate topic '" + id + "'");
        }
        data.embeddings = std::move(table);
    }

    return CorpusStore(std::move(data), window);
}

IngestPaths paths_in_directory(const std::string& dir) {
    IngestPaths p;
    p.counts = dir + "/topic_counts.csv";
    p.global = dir + "/global_stats.csv";
    p.patents = dir + "/patents.csv";
    if (std::filesystem::exists(dir + "/embeddings.csv")) p.embeddings = dir + "/embeddings.csv";
    return p;
}

void write_counts_csv(const CorpusStore& store, std::ostream& out) {
    out << "topic,year,publications,review_publications\n";
    for (const auto& [id, rec] : store.topics()) {
        for (const auto& [year, c] : rec.counts) {
            out << csv::quote(rec.meta.display_name) << ',' << year << ',' << c.publications << ','
                << c.review_publications << '\n';
        }
    }
}

void write_popularity_csv(const CorpusStore& store, std::ostream& out) {
    out << "topic,year,popularity,review_popularity,research_popularity,patent_count\n";
    for (const auto& [id, rec] : store.topics()) {
        for (const auto& [year, pt] : rec.popularity) {
            out << csv::quote(id) << ',' << year << ',' << csv::format_double(pt.popularity) << ','
                << csv::format_double(pt.review_popularity) << ',' << csv::format_double(pt.research_popularity)
                << ',' << store.patents_at(rec, year) << '\n';
        }
    }
}

void write_topics_csv(const CorpusStore& store, std::ostream& out) {
    auto opt = [](const std::optional<int>& v) { return v ? std::to_string(*v) : std::string(); };
    out << "topic,display_name,first_occurrence_year,first_valid_year,training_start_year,has_embedding\n";
    for (const auto& [id, rec] : store.topics()) {
        const auto& m = rec.meta;
        out << csv::quote(id) << ',' << csv::quote(m.display_name) << ',' << opt(m.first_occurrence_year) << ','
            << opt(m.first_valid_year) << ',' << opt(m.training_start_year) << ',' << (m.has_embedding ? 1 : 0)
            << '\n';
    }
}

CorpusData snapshot_data(const CorpusStore& store) {
    CorpusData data;
    for (const auto& [id, rec] : store.topics()) {
        for (const auto& [year, c] : rec.counts) {
            auto row = c;
            row.topic_id = rec.meta.display_name;
            data.counts.push_back(std::move(row));
        }
        for (const auto& [year, n] : rec.patents) data.patents.push_back({rec.meta.display_name, year, n});
    }
    for (const auto& [year, g] : store.globals()) data.globals.push_back(g);
    data.embeddings = store.embeddings();
    return data;
}

void write_corpus_directory(const CorpusData& data, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
    auto open = [&](const std::string& name) {
        std::ofstream f(dir + "/" + name);
        if (!f) throw IoError("cannot write '" + dir + "/" + name + "'");
        return f;
    };
    {
        auto f = open("topic_counts.csv");
        f << "topic,year,publications,review_publications\n";
        for (const auto& c : data.counts) {
            f << csv::quote(c.topic_id) << ',' << c.year << ',' << c.publications << ',' << c.review_publications << '\n';
        }
    }
    {
        auto f = open("global_stats.csv");
        f << "year,medline_total,us_publication_fraction,patents_total\n";
        for (const auto& g : data.globals) {
            f << g.year << ',' << g.medline_total << ',' << csv::format_double(g.us_publication_fraction) << ','
              << g.patents_total << '\n';
        }
    }
    {
        auto f = open("patents.csv");
        f << "topic,year,patent_count\n";
        for (const auto& p : data.patents) f << csv::quote(p.topic_id) << ',' << p.year << ',' << p.patent_count << '\n';
    }
    if (data.embeddings) {
        auto f = open("embeddings.csv");
        f << "topic";
        for (std::size_t d = 0; d < data.embeddings->dim; ++d) f << ",e" << d;
        f << '\n';
        for (const auto& [topic, vec] : data.embeddings->vectors) {
            f << csv::quote(topic);
            for (double v : vec) f << ',' << csv::format_double(v);
            f << '\n';
        }
    }
}

std::map<int, double> mean_popularity_by_year(const CorpusStore& store) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& [id, rec] : store.topics()) {
        for (const auto& [year, pt] : rec.popularity) {
            auto& [sum, n] = acc[year];
            sum += pt.popularity;
            ++n;
        }
    }
    std::map<int, double> out;
    for (const auto& [year, sn] : acc) out[year] = sn.first / sn.second;
    return out;
}

}  // namespace trendcast::corpus
