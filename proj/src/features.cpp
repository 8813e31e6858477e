#include "trendcast/features.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>

#include "trendcast/csv.hpp"
#include "trendcast/error.hpp"

namespace trendcast::features {

double pct_change(double current, double past) {
    if (past == 0.0 || is_missing(past) || is_missing(current)) return kMissing;
    return 100.0 * (current - past) / past;
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

const std::vector<std::string>& base_feature_names() {
    static const std::vector<std::string> names = {
        "pop_lag0",
        "pop_lag1",
        "pop_lag2",
        "pop_lag3",
        "pop_lag4",
        "pop_lag5",
        "pop_window_mean_5_10",
        "pct_diff",
        "lag5_pct_new",
        "y_raw",
        "review_pop",
        "research_pop",
        "research_review_ratio",
        "review_research_diff",
        "abs_publications",
        "us_fraction",
        "patent_yearly_total",
        "patent_fraction",
        "patent_lag1",
        "patent_lag2",
        "patent_lag3",
        "patent_lag4",
        "patent_lag5",
        "year_num",
        "years_since_first_occurrence",
        "years_since_first_valid",
        "valid_gap",
    };
    return names;
}

FeatureSchema make_schema(std::size_t embedding_dim) {
    FeatureSchema s;
    s.names = base_feature_names();
    for (std::size_t i = 0; i < embedding_dim; ++i) s.names.push_back("embed_" + std::to_string(i));
    s.embedding_dim = embedding_dim;
    return s;
}

FeatureSchema schema_for(const corpus::CorpusStore& store, bool embeddings) {
    return make_schema(embeddings && store.embeddings() ? store.embeddings()->dim : 0);
}

FeatureTable FeatureTable::subset(std::span<const std::size_t> indices) const {
    FeatureTable out;
    out.schema = schema;
    out.rows.reserve(indices.size());
    for (auto i : indices) out.rows.push_back(rows.at(i));
    return out;
}

std::vector<double> FeatureTable::targets_pop() const {
    std::vector<double> y;
    y.reserve(rows.size());
    for (const auto& r : rows) y.push_back(r.target_pop);
    return y;
}

std::vector<double> FeatureTable::targets_pct() const {
    std::vector<double> y;
    y.reserve(rows.size());
    for (const auto& r : rows) y.push_back(r.target_pct);
    return y;
}

FeatureRow build_feature_row(const corpus::CorpusStore& store, const corpus::TopicRecord& topic, int t,
                             int horizon, std::size_t embedding_dim) {
    const auto pop = [&](int year) { return store.popularity_at(topic, year); };
    const auto patents = [&](int year) { return static_cast<double>(store.patents_at(topic, year)); };
    const auto& meta = topic.meta;
    const auto* global = store.global(t);

    FeatureRow row;
    row.topic_id = meta.topic_id;
    row.base_year = t;
    row.horizon = horizon;
    auto& v = row.values;
    v.reserve(base_feature_names().size() + embedding_dim);

    for (int lag = 0; lag <= 5; ++lag) v.push_back(pop(t - lag));

    double window = 0.0;
    for (int year = t - 10; year <= t - 5; ++year) window += pop(year);
    v.push_back(window / 6.0);

    v.push_back(pct_change(pop(t), pop(t - 1)));
    v.push_back(pct_change(pop(t), pop(t - 5)));
    v.push_back(pop(t));

    const double review = store.review_popularity_at(topic, t);
    const double research = store.research_popularity_at(topic, t);
    v.push_back(review);
    v.push_back(research);
    v.push_back(review > 0.0 ? research / review : kMissing);
    v.push_back(review - research);

    v.push_back(global ? pop(t) * static_cast<double>(global->medline_total) / corpus::kPopularityScale : 0.0);
    v.push_back(global ? global->us_publication_fraction : kMissing);

    v.push_back(patents(t));
    v.push_back(global && global->patents_total > 0 ? patents(t) / static_cast<double>(global->patents_total)
                                                    : kMissing);
    for (int lag = 1; lag <= 5; ++lag) v.push_back(patents(t - lag));

    auto since = [&](const std::optional<int>& year) { return year ? static_cast<double>(t - *year) : kMissing; };
    v.push_back(static_cast<double>(t - corpus::kModernEraStart));
    v.push_back(since(meta.first_occurrence_year));
    v.push_back(since(meta.first_valid_year));
    v.push_back(meta.first_valid_year && meta.first_occurrence_year
                    ? static_cast<double>(*meta.first_valid_year - *meta.first_occurrence_year)
                    : kMissing);

    if (embedding_dim > 0) {
        const auto* vec = store.embeddings() ? store.embeddings()->find(meta.topic_id) : nullptr;
        for (std::size_t i = 0; i < embedding_dim; ++i) v.push_back(vec ? (*vec)[i] : kMissing);
    }

    if (t + horizon <= topic.last_observed_year()) {
        row.target_pop = pop(t + horizon);
        row.target_pct = pct_change(row.target_pop, pop(t));
    }
    return row;
}

FeatureTable build_feature_rows(const corpus::CorpusStore& store, const FeatureOptions& options) {
    if (options.horizon < kMinHorizon || options.horizon > kMaxHorizon) {
        throw ValidationError("horizon must be in [1,6]");
    }
    FeatureTable table;
    table.schema = schema_for(store, options.embeddings);
    for (const auto& [id, topic] : store.topics()) {
        const auto start = topic.meta.training_start_year;
        if (!start) {
            table.excluded_topics.push_back(id);
            continue;
        }
        int last = topic.last_observed_year() - options.horizon;
        if (options.last_base_year) last = std::min(last, *options.last_base_year);
        for (int t = std::max(*start, options.first_base_year); t <= last; ++t) {
            table.rows.push_back(build_feature_row(store, topic, t, options.horizon, table.schema.embedding_dim));
        }
    }
    return table;
}

void write_features_csv(const FeatureTable& table, std::ostream& out) {
    std::vector<std::string> header = {"topic", "base_year", "horizon"};
    header.insert(header.end(), table.schema.names.begin(), table.schema.names.end());
    header.push_back("target_pop");
    header.push_back("target_pct");
    out << csv::join(header) << '\n';
    for (const auto& row : table.rows) {
        out << csv::quote(row.topic_id) << ',' << row.base_year << ',' << row.horizon;
        for (double v : row.values) out << ',' << csv::format_double(v);
        out << ',' << csv::format_double(row.target_pop) << ',' << csv::format_double(row.target_pct) << '\n';
    }
}

FeatureTable read_features_csv(const std::string& path) {
    const auto csv_table = csv::read_file(path);
    const auto& h = csv_table.header;
    if (h.size() < 5 || h[0] != "topic" || h[1] != "base_year" || h[2] != "horizon" ||
        h[h.size() - 2] != "target_pop" || h.back() != "target_pct") {
        throw IngestError(path, 1, 1, "not a features file");
    }
    FeatureTable table;
    table.schema.names.assign(h.begin() + 3, h.end() - 2);
    for (const auto& name : table.schema.names) {
        if (name.rfind("embed_", 0) == 0) ++table.schema.embedding_dim;
    }
    auto number = [&](const csv::Record& rec, std::size_t col) {
        const auto& f = rec.fields[col];
        if (f.empty()) return kMissing;
        auto v = csv::parse_double(f);
        if (!v) throw IngestError(path, rec.line, col + 1, "'" + f + "' is not a number");
        return *v;
    };
    for (const auto& rec : csv_table.records) {
        if (rec.fields.size() != h.size()) throw IngestError(path, rec.line, 1, "wrong field count");
        FeatureRow row;
        row.topic_id = rec.fields[0];
        auto year = csv::parse_int(rec.fields[1]);
        auto horizon = csv::parse_int(rec.fields[2]);
        if (!year) throw IngestError(path, rec.line, 2, "bad base_year");
        if (!horizon) throw IngestError(path, rec.line, 3, "bad horizon");
        row.base_year = static_cast<int>(*year);
        row.horizon = static_cast<int>(*horizon);
        for (std::size_t c = 3; c + 2 < h.size(); ++c) row.values.push_back(number(rec, c));
        row.target_pop = number(rec, h.size() - 2);
        row.target_pct = number(rec, h.size() - 1);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace trendcast::features
