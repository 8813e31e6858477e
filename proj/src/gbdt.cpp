#include "trendcast/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trendcast/error.hpp"
#include "trendcast/matrix.hpp"

namespace trendcast::models {

void TrainParams::validate() const {
    if (rounds < 0) throw ValidationError("rounds must be non-negative");
    if (max_depth < 1) throw ValidationError("max_depth must be positive");
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) throw ValidationError("learning_rate must be in (0, 1]");
    if (min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be positive");
    if (!(encoding_smoothing > 0.0)) throw ValidationError("encoding smoothing must be positive");
}

int Tree::leaf_index(std::span<const double> x) const {
    int k = 0;
    while (!nodes[static_cast<std::size_t>(k)].is_leaf()) {
        const auto& node = nodes[static_cast<std::size_t>(k)];
        const double v = x[static_cast<std::size_t>(node.feature)];
        const bool go_left = features::is_missing(v) ? node.missing_left : v <= node.threshold;
        k = go_left ? node.left : node.right;
    }
    return k;
}

int Tree::depth() const {
    std::vector<int> d(nodes.size(), 0);
    int deepest = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (nodes[k].is_leaf()) continue;
        d[static_cast<std::size_t>(nodes[k].left)] = d[k] + 1;
        d[static_cast<std::size_t>(nodes[k].right)] = d[k] + 1;
        deepest = std::max(deepest, d[k] + 1);
    }
    return deepest;
}

std::vector<std::string> GbdtModel::input_names() const {
    auto names = schema.names;
    if (encode_topic) names.emplace_back(kTopicEncodingFeature);
    return names;
}

double GbdtModel::predict_row(std::span<const double> x) const {
    double f = initial_prediction;
    for (const auto& tree : trees) f += learning_rate * tree.predict(x);
    return f;
}

namespace {

using Columns = std::vector<std::vector<double>>;

struct SortedEntry {
    double value;
    std::uint32_t row;
};

struct Presorted {
    std::vector<std::vector<SortedEntry>> present;  // per feature, non-missing rows by ascending value
    std::vector<std::vector<std::uint32_t>> missing;
};

Presorted presort(const Columns& cols, std::size_t n) {
    Presorted p;
    p.present.resize(cols.size());
    p.missing.resize(cols.size());
    for (std::size_t f = 0; f < cols.size(); ++f) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = static_cast<std::uint32_t>(i);
            if (features::is_missing(cols[f][i])) {
                p.missing[f].push_back(row);
            } else {
                p.present[f].push_back({cols[f][i], row});
            }
        }
        std::stable_sort(p.present[f].begin(), p.present[f].end(),
                         [](const SortedEntry& a, const SortedEntry& b) { return a.value < b.value; });
    }
    return p;
}

struct Best {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    bool missing_left = true;
};

/// Node-contiguous views: every feature's sorted entries and the row list are kept partitioned so
/// that each open node owns one contiguous segment of each, in ascending value order.
struct Workspace {
    std::vector<std::vector<SortedEntry>> entries;
    std::vector<std::uint32_t> rows;
    std::vector<SortedEntry> entry_buffer;
    std::vector<std::uint32_t> row_buffer;
    std::vector<char> goes_left;
};

struct Segment {
    std::vector<std::uint32_t> begin, end;  // per feature
    std::uint32_t row_begin = 0, row_end = 0;
};

template <typename T, typename Pred>
std::uint32_t stable_partition_with(std::vector<T>& v, std::uint32_t begin, std::uint32_t end, std::vector<T>& buffer,
                                    Pred left) {
    buffer.clear();
    std::uint32_t out = begin;
    for (std::uint32_t i = begin; i < end; ++i) {
        if (left(v[i])) {
            v[out++] = v[i];
        } else {
            buffer.push_back(v[i]);
        }
    }
    std::copy(buffer.begin(), buffer.end(), v.begin() + out);
    return out;
}

/// Grows one level-wise tree on the residuals and leaves each row's leaf id in node_of.
Tree grow_tree(const Columns& cols, const Presorted& sorted, std::span<const double> residual,
               const TrainParams& params, std::vector<int>& node_of, Workspace& ws) {
    const std::size_t n = residual.size();
    const std::size_t n_features = cols.size();
    const double min_leaf = params.min_samples_leaf;

    ws.entries = sorted.present;
    ws.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) ws.rows[i] = static_cast<std::uint32_t>(i);
    ws.goes_left.assign(n, 0);

    Tree tree;
    tree.nodes.emplace_back();
    std::vector<double> sum = {std::accumulate(residual.begin(), residual.end(), 0.0)};
    std::vector<double> count = {static_cast<double>(n)};
    std::vector<Segment> segments(1);
    segments[0].begin.assign(n_features, 0);
    segments[0].end.resize(n_features);
    for (std::size_t f = 0; f < n_features; ++f) segments[0].end[f] = static_cast<std::uint32_t>(ws.entries[f].size());
    segments[0].row_end = static_cast<std::uint32_t>(n);
    std::vector<int> frontier = {0};

    for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
        std::vector<int> next;
        for (int node_id : frontier) {
            const auto k = static_cast<std::size_t>(node_id);
            if (count[k] < 2 * min_leaf) continue;
            const double total = sum[k], c = count[k];
            const double parent = total * total / c;
            Best best;

            for (std::size_t f = 0; f < n_features; ++f) {
                const SortedEntry* first = ws.entries[f].data() + segments[k].begin[f];
                const SortedEntry* last = ws.entries[f].data() + segments[k].end[f];
                double present_sum = 0.0;
                for (const auto* e = first; e != last; ++e) present_sum += residual[e->row];
                const double mc = c - static_cast<double>(last - first);
                const double ms = mc > 0.0 ? total - present_sum : 0.0;
                const double present_cnt = c - mc;

                double sl = 0.0, cl = 0.0, prev = 0.0;
                for (const auto* e = first; e != last; ++e) {
                    if (cl > 0.0 && e->value > prev) {
                        const double sr = present_sum - sl, cr = present_cnt - cl;
                        if (cl + mc >= min_leaf && cr + mc >= min_leaf) {
                            double threshold = prev + (e->value - prev) / 2.0;
                            if (!(threshold > prev && threshold < e->value)) threshold = prev;
                            if (cr >= min_leaf) {
                                const double a_s = sl + ms, a_c = cl + mc;
                                const double gain = a_s * a_s / a_c + sr * sr / cr - parent;
                                if (gain > best.gain) best = {gain, static_cast<int>(f), threshold, true};
                            }
                            if (mc > 0.0 && cl >= min_leaf) {
                                const double b_s = sr + ms, b_c = cr + mc;
                                const double gain = sl * sl / cl + b_s * b_s / b_c - parent;
                                if (gain > best.gain) best = {gain, static_cast<int>(f), threshold, false};
                            }
                        }
                    }
                    sl += residual[e->row];
                    cl += 1.0;
                    prev = e->value;
                }
            }
            if (best.feature < 0) continue;

            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.emplace_back();
            tree.nodes.emplace_back();
            auto& node = tree.nodes[k];
            node.feature = best.feature;
            node.threshold = best.threshold;
            node.missing_left = best.missing_left;
            node.left = left;
            node.right = left + 1;

            const auto& col = cols[static_cast<std::size_t>(best.feature)];
            Segment seg = segments[k];
            double left_count = 0.0;
            for (std::uint32_t i = seg.row_begin; i < seg.row_end; ++i) {
                const std::uint32_t row = ws.rows[i];
                const double v = col[row];
                const bool go = features::is_missing(v) ? best.missing_left : v <= best.threshold;
                ws.goes_left[row] = go;
                if (go) left_count += 1.0;
            }
            Segment lseg = seg, rseg = seg;
            const auto row_mid = stable_partition_with(ws.rows, seg.row_begin, seg.row_end, ws.row_buffer,
                                                       [&](std::uint32_t r) { return ws.goes_left[r] != 0; });
            lseg.row_end = rseg.row_begin = row_mid;
            for (std::size_t f = 0; f < n_features; ++f) {
                const auto mid = stable_partition_with(ws.entries[f], seg.begin[f], seg.end[f], ws.entry_buffer,
                                                       [&](const SortedEntry& e) { return ws.goes_left[e.row] != 0; });
                lseg.end[f] = rseg.begin[f] = mid;
            }
            double lsum = 0.0, rsum = 0.0;
            for (std::uint32_t i = lseg.row_begin; i < lseg.row_end; ++i) lsum += residual[ws.rows[i]];
            for (std::uint32_t i = rseg.row_begin; i < rseg.row_end; ++i) rsum += residual[ws.rows[i]];
            sum.push_back(lsum);
            sum.push_back(rsum);
            count.push_back(left_count);
            count.push_back(c - left_count);
            segments.push_back(std::move(lseg));
            segments.push_back(std::move(rseg));
            next.push_back(left);
            next.push_back(left + 1);
        }
        frontier = std::move(next);
    }

    for (std::size_t k = 0; k < tree.nodes.size(); ++k) {
        auto& node = tree.nodes[k];
        node.value = count[k] > 0.0 ? sum[k] / count[k] : 0.0;
        if (!node.is_leaf()) continue;
        for (std::uint32_t i = segments[k].row_begin; i < segments[k].row_end; ++i) {
            node_of[ws.rows[i]] = static_cast<int>(k);
        }
    }
    return tree;
}

double shifted_mean(std::span<const double> y) {
    double acc = 0.0;
    for (double v : y) acc += v - y[0];
    return y[0] + acc / static_cast<double>(y.size());
}

double mse(std::span<const double> y, std::span<const double> f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) acc += (y[i] - f[i]) * (y[i] - f[i]);
    return acc / static_cast<double>(y.size());
}

}  // namespace

GbdtModel fit_gbdt(const features::FeatureTable& table, std::span<const double> targets, const TrainParams& params,
                   bool encode_topic) {
    params.validate();
    const std::size_t n = table.rows.size();
    if (n == 0) throw ValidationError("gbdt: no training rows");
    if (targets.size() != n) throw ValidationError("gbdt: target count does not match row count");
    for (double y : targets) {
        if (!std::isfinite(y)) throw ValidationError("gbdt: non-finite target");
    }

    GbdtModel model;
    model.schema = table.schema;
    model.encode_topic = encode_topic;
    model.learning_rate = params.learning_rate;
    model.params = params;

    const Matrix x = design_matrix(table, table.schema.names);
    Columns cols(x.cols + (encode_topic ? 1 : 0), std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < x.cols; ++c) cols[c][r] = x(r, c);
    }
    if (encode_topic) {
        std::vector<std::string> topics;
        std::vector<int> years;
        for (const auto& row : table.rows) {
            topics.push_back(row.topic_id);
            years.push_back(row.base_year);
        }
        auto enc = target_encode(topics, years, targets, params.encoding_smoothing);
        cols.back() = std::move(enc.encoded);
        model.encoding = std::move(enc.encoding);
    }
    const Presorted sorted = presort(cols, n);

    model.initial_prediction = shifted_mean(targets);
    std::vector<double> f(n, model.initial_prediction);
    std::vector<double> residual(n);
    std::vector<int> node_of(n);
    Workspace workspace;
    model.train_mse.push_back(mse(targets, f));
    model.trees.reserve(static_cast<std::size_t>(params.rounds));

    for (int round = 0; round < params.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) residual[i] = targets[i] - f[i];
        Tree tree = grow_tree(cols, sorted, residual, params, node_of, workspace);
        for (std::size_t i = 0; i < n; ++i) {
            f[i] += model.learning_rate * tree.nodes[static_cast<std::size_t>(node_of[i])].value;
        }
        model.trees.push_back(std::move(tree));
        model.train_mse.push_back(mse(targets, f));
    }
    return model;
}

std::vector<std::vector<double>> gbdt_inputs(const GbdtModel& model, const features::FeatureTable& table) {
    check_schema(model.schema, table.schema);
    const Matrix x = design_matrix(table, model.schema.names);
    std::vector<std::vector<double>> rows(x.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        rows[r].assign(x.row(r).begin(), x.row(r).end());
        if (model.encode_topic) rows[r].push_back(model.encoding.encode(table.rows[r].topic_id));
    }
    return rows;
}

std::vector<double> predict(const GbdtModel& model, const features::FeatureTable& table) {
    const auto rows = gbdt_inputs(model, table);
    std::vector<double> out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out[r] = model.predict_row(rows[r]);
    return out;
}

}  // namespace trendcast::models
