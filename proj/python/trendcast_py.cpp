#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "trendcast/cli.hpp"
#include "trendcast/corpus.hpp"
#include "trendcast/correlation.hpp"
#include "trendcast/error.hpp"
#include "trendcast/experiment.hpp"
#include "trendcast/features.hpp"
#include "trendcast/metrics.hpp"
#include "trendcast/service.hpp"
#include "trendcast/synthetic.hpp"

namespace py = pybind11;
using namespace trendcast;

namespace {

py::dict metrics_dict(const evaluation::MetricsReport& m) {
    py::dict d;
    d["r2"] = m.r2 ? py::cast(*m.r2) : py::none();
    d["mae"] = m.mae;
    d["medae"] = m.medae;
    d["rmse"] = m.rmse;
    d["binary_accuracy"] = m.binary_accuracy ? py::cast(*m.binary_accuracy) : py::none();
    d["baseline_accuracy"] = m.majority_baseline_accuracy ? py::cast(*m.majority_baseline_accuracy) : py::none();
    d["n"] = m.n;
    return d;
}

using Store = std::shared_ptr<const corpus::CorpusStore>;

}  // namespace

PYBIND11_MODULE(_trendcast, m) {
    m.doc() = "Topic popularity forecasting core";

    py::register_exception<IoError>(m, "IoError", PyExc_OSError);
    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

    m.def("canonical_topic_id", [](const std::string& s) { return corpus::canonical_topic_id(s); });
    m.def("popularity", &corpus::popularity, py::arg("count"), py::arg("total"));
    m.def("first_occurrence_year", &corpus::first_occurrence_year, py::arg("series"));
    m.def("first_valid_year", &corpus::first_valid_year, py::arg("series"));
    m.def(
        "training_start_year",
        [](const corpus::YearSeries& s, bool preceding_only) {
            return corpus::training_start_year(
                s, preceding_only ? corpus::StartWindow::kPrecedingOnly : corpus::StartWindow::kIncludeCurrent);
        },
        py::arg("series"), py::arg("preceding_only") = false);

    py::class_<corpus::CorpusStore, std::shared_ptr<corpus::CorpusStore>>(m, "Corpus")
        .def_property_readonly("last_year", &corpus::CorpusStore::last_year)
        .def("topic_ids",
             [](const corpus::CorpusStore& s) {
                 std::vector<std::string> ids;
                 for (const auto& [id, rec] : s.topics()) ids.push_back(id);
                 return ids;
             })
        .def("popularity",
             [](const corpus::CorpusStore& s, const std::string& topic) {
                 const auto* rec = s.find(topic);
                 if (!rec) throw ValidationError("unknown topic '" + topic + "'");
                 std::map<int, double> out;
                 for (const auto& [year, pt] : rec->popularity) out[year] = pt.popularity;
                 return out;
             })
        .def("__len__", [](const corpus::CorpusStore& s) { return s.topics().size(); });

    m.def(
        "load_corpus",
        [](const std::string& dir) {
            return std::make_shared<corpus::CorpusStore>(corpus::ingest(corpus::paths_in_directory(dir)));
        },
        py::arg("directory"));

    m.def(
        "build_features",
        [](const corpus::CorpusStore& store, int horizon, bool embeddings, int first_base_year, int last_base_year) {
            features::FeatureOptions o{horizon, embeddings, first_base_year, last_base_year};
            const auto table = features::build_feature_rows(store, o);
            py::list topics, years, values;
            for (const auto& r : table.rows) {
                topics.append(r.topic_id);
                years.append(r.base_year);
                values.append(py::cast(r.values));
            }
            py::dict d;
            d["names"] = table.schema.names;
            d["topic"] = topics;
            d["base_year"] = years;
            d["values"] = values;
            d["target_pop"] = table.targets_pop();
            d["target_pct"] = table.targets_pct();
            return d;
        },
        py::arg("corpus"), py::arg("horizon") = features::kDefaultHorizon, py::arg("embeddings") = true,
        py::arg("first_base_year") = corpus::kModernEraStart, py::arg("last_base_year") = 2019);

    m.def(
        "regression_metrics",
        [](const std::vector<double>& y_true, const std::vector<double>& y_pred) {
            return metrics_dict(evaluation::regression_metrics(y_true, y_pred));
        },
        py::arg("y_true"), py::arg("y_pred"));

    m.def(
        "pearson_lagged",
        [](const std::map<int, double>& a, const std::map<int, double>& b, int lag) {
            return evaluation::pearson_lagged(a, b, lag).r;
        },
        py::arg("a"), py::arg("b"), py::arg("lag"));

    m.def(
        "evaluate",
        [](const corpus::CorpusStore& store, const std::string& model, const std::string& target,
           const std::string& split, int horizon, std::size_t n_splits, std::uint64_t seed, bool embeddings,
           int rounds) {
            evaluation::ExperimentConfig c;
            c.model = models::parse_model_kind(model);
            c.target = models::parse_target_kind(target);
            c.split = evaluation::parse_split_kind(split);
            c.horizon = horizon;
            c.n_splits = n_splits;
            c.seed = seed;
            c.embeddings = embeddings;
            c.fit.gbdt.rounds = rounds;
            c.fit.gbdt.seed = seed;
            evaluation::ExperimentResult result;
            {
                py::gil_scoped_release release;
                result = evaluation::run_experiment(store, c);
            }
            py::dict d = metrics_dict(result.pooled);
            d["model"] = result.model_label;
            py::list folds;
            for (const auto& f : result.folds) folds.append(metrics_dict(f.metrics));
            d["folds"] = folds;
            return d;
        },
        py::arg("corpus"), py::arg("model") = "gbdt", py::arg("target") = "pop", py::arg("split") = "temporal",
        py::arg("horizon") = features::kDefaultHorizon, py::arg("n_splits") = evaluation::kDefaultSplits,
        py::arg("seed") = 42, py::arg("embeddings") = true, py::arg("rounds") = 500);

    m.def(
        "write_synthetic_corpus",
        [](const std::string& dir, std::size_t n_topics, int first_year, int n_years, std::uint64_t seed) {
            synthetic::LeadingIndicatorOptions o;
            o.n_topics = n_topics;
            o.first_year = first_year;
            o.n_years = n_years;
            o.seed = seed;
            corpus::write_corpus_directory(synthetic::leading_indicator_corpus(o).data, dir);
        },
        py::arg("directory"), py::arg("n_topics") = 50, py::arg("first_year") = 1975, py::arg("n_years") = 45,
        py::arg("seed") = 42);

    py::class_<service::Registry, std::shared_ptr<service::Registry>>(m, "Forecaster")
        .def(py::init([](const std::string& corpus_dir, const std::string& model_dir) {
                 return std::make_shared<service::Registry>(service::load_registry(corpus_dir, model_dir));
             }),
             py::arg("corpus_dir"), py::arg("model_dir"))
        .def_readonly("max_horizon", &service::Registry::max_horizon)
        .def(
            "forecast_json",
            [](const service::Registry& reg, const std::vector<std::string>& topics, int max_horizon) {
                return service::forecast_batch(reg, topics, max_horizon == 0 ? reg.max_horizon : max_horizon).dump();
            },
            py::arg("topics"), py::arg("max_horizon") = 0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
