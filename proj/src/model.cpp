#include "trendcast/model.hpp"

#include <cmath>
#include <fstream>

#include "trendcast/error.hpp"

namespace trendcast::models {

using nlohmann::json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::kBaseline: return "baseline";
        case ModelKind::kRidge: return "ridge";
        case ModelKind::kGbdt: return "gbdt";
    }
    return "?";
}

std::string to_string(TargetKind kind) { return kind == TargetKind::kPop ? "pop" : "pct"; }

ModelKind parse_model_kind(const std::string& text) {
    if (text == "baseline") return ModelKind::kBaseline;
    if (text == "ridge") return ModelKind::kRidge;
    if (text == "gbdt") return ModelKind::kGbdt;
    throw ValidationError("unknown model kind '" + text + "' (expected ridge, gbdt or baseline)");
}

TargetKind parse_target_kind(const std::string& text) {
    if (text == "pop") return TargetKind::kPop;
    if (text == "pct") return TargetKind::kPct;
    throw ValidationError("unknown target kind '" + text + "' (expected pop or pct)");
}

std::string baseline_feature(TargetKind target) { return target == TargetKind::kPop ? "pop_lag0" : "lag5_pct_new"; }

RidgeModel fit_lag_baseline(const features::FeatureTable& table, std::span<const double> targets, TargetKind target,
                            std::span<const double> alpha_grid, int k_folds) {
    const std::string feature = baseline_feature(target);
    if (!table.schema.index_of(feature)) throw ValidationError("baseline requires feature '" + feature + "'");
    auto model = fit_ridge_cv(table, {feature}, targets, alpha_grid, k_folds, FillPolicy::kZero);
    model.baseline = true;
    return model;
}

ModelKind kind_of(const Model& model) {
    if (const auto* r = std::get_if<RidgeModel>(&model)) return r->baseline ? ModelKind::kBaseline : ModelKind::kRidge;
    return ModelKind::kGbdt;
}

const features::FeatureSchema& schema_of(const Model& model) {
    return std::visit([](const auto& m) -> const features::FeatureSchema& { return m.schema; }, model);
}

Model fit_model(ModelKind kind, TargetKind target, const features::FeatureTable& table,
                std::span<const double> targets, const FitOptions& options) {
    switch (kind) {
        case ModelKind::kBaseline:
            return fit_lag_baseline(table, targets, target, options.alpha_grid, options.ridge_folds);
        case ModelKind::kRidge:
            return fit_ridge_cv(table, targets, options.alpha_grid, options.ridge_folds);
        case ModelKind::kGbdt:
            return fit_gbdt(table, targets, options.gbdt);
    }
    throw ValidationError("unknown model kind");
}

std::vector<double> predict(const Model& model, const features::FeatureTable& table) {
    return std::visit([&](const auto& m) { return predict(m, table); }, model);
}

namespace {

// JSON has no NaN; non-finite values travel as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double number(const json& j) { return j.is_null() ? features::kMissing : j.get<double>(); }

json vec_json(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(number(x));
    return arr;
}

std::vector<double> vec_from(const json& j) {
    std::vector<double> v;
    for (const auto& x : j) v.push_back(number(x));
    return v;
}

json schema_json(const features::FeatureSchema& s) { return {{"features", s.names}, {"embedding_dim", s.embedding_dim}}; }

features::FeatureSchema schema_from(const json& j) {
    features::FeatureSchema s;
    s.names = j.at("features").get<std::vector<std::string>>();
    s.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    return s;
}

}  // namespace

json to_json(const Model& model) {
    json doc;
    doc["schema_version"] = kModelSchemaVersion;
    doc["model_kind"] = to_string(kind_of(model));
    doc["schema"] = schema_json(schema_of(model));
    if (const auto* r = std::get_if<RidgeModel>(&model)) {
        doc["parameters"] = {{"alpha", r->alpha}, {"cv_mse", vec_json(r->cv_mse)}};
        doc["payload"] = {{"features", r->features},
                          {"fill", vec_json(r->standardization.fill)},
                          {"mean", vec_json(r->standardization.mean)},
                          {"stddev", vec_json(r->standardization.stddev)},
                          {"weights", vec_json(r->weights)},
                          {"intercept", r->intercept}};
        return doc;
    }
    const auto& g = std::get<GbdtModel>(model);
    doc["parameters"] = {{"rounds", g.params.rounds},
                         {"max_depth", g.params.max_depth},
                         {"learning_rate", g.params.learning_rate},
                         {"min_samples_leaf", g.params.min_samples_leaf},
                         {"seed", g.params.seed},
                         {"encoding_smoothing", g.params.encoding_smoothing}};
    json trees = json::array();
    for (const auto& tree : g.trees) {
        json nodes = json::array();
        for (const auto& n : tree.nodes) {
            if (n.is_leaf()) {
                nodes.push_back({{"value", n.value}});
            } else {
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"missing_left", n.missing_left},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"value", n.value}});
            }
        }
        trees.push_back(std::move(nodes));
    }
    doc["payload"] = {{"initial_prediction", g.initial_prediction},
                      {"learning_rate", g.learning_rate},
                      {"encode_topic", g.encode_topic},
                      {"encoding",
                       {{"table", g.encoding.table},
                        {"prior_mean", g.encoding.prior_mean},
                        {"smoothing", g.encoding.smoothing}}},
                      {"train_mse", vec_json(g.train_mse)},
                      {"trees", std::move(trees)}};
    return doc;
}

Model model_from_json(const json& doc) {
    try {
        const int version = doc.at("schema_version").get<int>();
        if (version != kModelSchemaVersion) {
            throw ValidationError("unsupported model schema_version " + std::to_string(version));
        }
        const auto kind = parse_model_kind(doc.at("model_kind").get<std::string>());
        const auto schema = schema_from(doc.at("schema"));
        const auto& p = doc.at("payload");
        const auto& params = doc.at("parameters");
        if (kind != ModelKind::kGbdt) {
            RidgeModel r;
            r.schema = schema;
            r.baseline = kind == ModelKind::kBaseline;
            r.alpha = params.at("alpha").get<double>();
            r.cv_mse = vec_from(params.at("cv_mse"));
            r.features = p.at("features").get<std::vector<std::string>>();
            r.standardization.fill = vec_from(p.at("fill"));
            r.standardization.mean = vec_from(p.at("mean"));
            r.standardization.stddev = vec_from(p.at("stddev"));
            r.weights = vec_from(p.at("weights"));
            r.intercept = p.at("intercept").get<double>();
            if (r.weights.size() != r.features.size() || r.standardization.mean.size() != r.features.size()) {
                throw ValidationError("ridge payload has inconsistent lengths");
            }
            return r;
        }
        GbdtModel g;
        g.schema = schema;
        g.params.rounds = params.at("rounds").get<int>();
        g.params.max_depth = params.at("max_depth").get<int>();
        g.params.learning_rate = params.at("learning_rate").get<double>();
        g.params.min_samples_leaf = params.at("min_samples_leaf").get<int>();
        g.params.seed = params.at("seed").get<std::uint64_t>();
        g.params.encoding_smoothing = params.at("encoding_smoothing").get<double>();
        g.initial_prediction = p.at("initial_prediction").get<double>();
        g.learning_rate = p.at("learning_rate").get<double>();
        g.encode_topic = p.at("encode_topic").get<bool>();
        const auto& enc = p.at("encoding");
        g.encoding.table = enc.at("table").get<std::map<std::string, double>>();
        g.encoding.prior_mean = enc.at("prior_mean").get<double>();
        g.encoding.smoothing = enc.at("smoothing").get<double>();
        g.train_mse = vec_from(p.at("train_mse"));
        const int n_inputs = static_cast<int>(schema.names.size()) + (g.encode_topic ? 1 : 0);
        for (const auto& jt : p.at("trees")) {
            Tree tree;
            for (const auto& jn : jt) {
                TreeNode n;
                n.value = jn.at("value").get<double>();
                if (jn.contains("feature")) {
                    n.feature = jn.at("feature").get<int>();
                    n.threshold = jn.at("threshold").get<double>();
                    n.missing_left = jn.at("missing_left").get<bool>();
                    n.left = jn.at("left").get<int>();
                    n.right = jn.at("right").get<int>();
                }
                tree.nodes.push_back(n);
            }
            const int size = static_cast<int>(tree.nodes.size());
            for (int k = 0; k < size; ++k) {
                const auto& n = tree.nodes[static_cast<std::size_t>(k)];
                if (n.is_leaf()) continue;
                if (n.feature >= n_inputs || n.left <= k || n.right <= k || n.left >= size || n.right >= size) {
                    throw ValidationError("gbdt payload has an invalid tree node");
                }
            }
            if (tree.nodes.empty()) throw ValidationError("gbdt payload has an empty tree");
            g.trees.push_back(std::move(tree));
        }
        return g;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const SavedModel& saved, const std::string& path) {
    json doc = to_json(saved.model);
    doc["target"] = to_string(saved.target);
    doc["horizon"] = saved.horizon;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << doc.dump(1) << '\n';
    if (!out) throw IoError("failed writing '" + path + "'");
}

SavedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
    SavedModel saved{model_from_json(doc)};
    saved.target = parse_target_kind(doc.value("target", std::string("pop")));
    saved.horizon = doc.value("horizon", features::kDefaultHorizon);
    return saved;
}

std::string model_file_name(int horizon, TargetKind target) {
    return "h" + std::to_string(horizon) + "_" + to_string(target) + ".json";
}

}  // namespace trendcast::models
