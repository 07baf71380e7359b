#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fraudkit/bench.hpp"
#include "fraudkit/metrics.hpp"
#include "fraudkit/resample.hpp"
#include "fraudkit/tune.hpp"

namespace py = pybind11;
using namespace fraudkit;
using nlohmann::json;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Dataset from_numpy(const Matrix& x, const Labels& y, std::vector<std::string> names) {
    if (x.ndim() != 2) throw std::invalid_argument("features must be a 2-D array");
    const auto n = static_cast<std::size_t>(x.shape(0)), m = static_cast<std::size_t>(x.shape(1));
    if (names.empty())
        for (std::size_t j = 0; j < m; ++j) names.push_back("f" + std::to_string(j));
    std::vector<double> f(x.data(), x.data() + n * m);
    std::vector<Label> l(y.data(), y.data() + y.size());
    return Dataset(std::move(f), std::move(l), std::move(names));
}

ScoredPredictions scored(const std::vector<double>& s, const std::vector<Label>& y) { return {s, y}; }

py::tuple curve_arrays(const Curve& c) {
    py::array_t<double> x(c.points.size()), y(c.points.size());
    auto px = x.mutable_unchecked<1>();
    auto py_ = y.mutable_unchecked<1>();
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        px(i) = c.points[i].x;
        py_(i) = c.points[i].y;
    }
    return py::make_tuple(x, y);
}

py::tuple resampled(const ResampledTrainingSet& r) {
    std::vector<bool> synthetic;
    for (auto p : r.provenance) synthetic.push_back(p == Provenance::Synthetic);
    return py::make_tuple(r.dataset, synthetic);
}

}  // namespace

PYBIND11_MODULE(_fraudkit, m) {
    m.doc() = "Imbalanced classification toolkit: resampling, models, metrics and the benchmark grid";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<MetricError>(m, "MetricError", PyExc_ValueError);
    py::register_exception<ParamError>(m, "ParamError", PyExc_ValueError);

    py::class_<Dataset>(m, "Dataset")
        .def(py::init(&from_numpy), py::arg("features"), py::arg("labels"),
             py::arg("names") = std::vector<std::string>{})
        .def_property_readonly("rows", &Dataset::rows)
        .def_property_readonly("cols", &Dataset::cols)
        .def_property_readonly("positives", &Dataset::positives)
        .def_property_readonly("negatives", &Dataset::negatives)
        .def_property_readonly("feature_names", &Dataset::feature_names)
        .def_property_readonly("features",
                               [](const Dataset& d) {
                                   Matrix out({d.rows(), d.cols()});
                                   std::copy(d.features().begin(), d.features().end(), out.mutable_data());
                                   return out;
                               })
        .def_property_readonly("labels",
                               [](const Dataset& d) {
                                   Labels out(static_cast<py::ssize_t>(d.rows()));
                                   std::copy(d.labels().begin(), d.labels().end(), out.mutable_data());
                                   return out;
                               })
        .def("subset", &Dataset::subset)
        .def("__len__", &Dataset::rows)
        .def("__eq__", [](const Dataset& a, const Dataset& b) { return a == b; });

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("label_column"));
    m.def("write_csv", &write_csv, py::arg("dataset"), py::arg("path"), py::arg("label_column"));

    py::class_<ZScoreStats>(m, "ZScoreStats")
        .def_readonly("names", &ZScoreStats::names)
        .def_readonly("mean", &ZScoreStats::mean)
        .def_readonly("stddev", &ZScoreStats::stddev);
    m.def("zscore_fit", &zscore_fit, py::arg("dataset"), py::arg("columns"));
    m.def("zscore_apply", &zscore_apply, py::arg("dataset"), py::arg("stats"));

    m.def(
        "stratified_split",
        [](const Dataset& d, double frac, std::uint64_t seed) {
            const SplitPair s = stratified_split(d, frac, seed);
            return py::make_tuple(s.train_indices, s.test_indices);
        },
        py::arg("dataset"), py::arg("test_fraction") = 0.2, py::arg("seed") = 0);
    m.def(
        "stratified_kfold", [](const Dataset& d, std::size_t k, std::uint64_t seed) { return stratified_kfold(d, k, seed); },
        py::arg("dataset"), py::arg("k"), py::arg("seed") = 0);

    m.def(
        "rus", [](const Dataset& d, std::uint64_t seed) { return resampled(rus(d, seed)); }, py::arg("dataset"),
        py::arg("seed") = 0);
    m.def(
        "smote", [](const Dataset& d, int k, std::uint64_t seed) { return resampled(smote(d, k, seed)); },
        py::arg("dataset"), py::arg("k") = 5, py::arg("seed") = 0);
    m.def(
        "smoteenn",
        [](const Dataset& d, int smote_k, int enn_k, std::uint64_t seed) {
            return resampled(smoteenn(d, smote_k, enn_k, seed));
        },
        py::arg("dataset"), py::arg("smote_k") = 5, py::arg("enn_k") = 3, py::arg("seed") = 0);
    m.def("enn", &enn, py::arg("dataset"), py::arg("k") = 3);

    m.def(
        "roc_auc", [](const std::vector<double>& s, const std::vector<Label>& y) { return roc_auc(scored(s, y)); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "average_precision",
        [](const std::vector<double>& s, const std::vector<Label>& y) { return average_precision(scored(s, y)); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "roc_curve", [](const std::vector<double>& s, const std::vector<Label>& y) { return curve_arrays(roc_curve(scored(s, y))); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "pr_curve", [](const std::vector<double>& s, const std::vector<Label>& y) { return curve_arrays(pr_curve(scored(s, y))); },
        py::arg("scores"), py::arg("labels"));
    m.def(
        "confusion_at",
        [](const std::vector<double>& s, const std::vector<Label>& y, double threshold) {
            const ConfusionMatrix cm = confusion_at(scored(s, y), threshold);
            py::dict d;
            d["tp"] = cm.tp;
            d["fp"] = cm.fp;
            d["tn"] = cm.tn;
            d["fn"] = cm.fn;
            return d;
        },
        py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

    py::class_<Classifier>(m, "Classifier")
        .def_property_readonly("family", [](const Classifier& c) { return to_string(c.family()); })
        .def("fit", &Classifier::fit, py::arg("train"))
        .def(
            "predict_proba", [](const Classifier& c, const Dataset& d) { return c.predict_proba(d); },
            py::arg("dataset"));
    m.def(
        "make_classifier",
        [](const std::string& family, const std::string& params, std::uint64_t seed) {
            return make_classifier(parse_model_family(family), json::parse(params), seed);
        },
        py::arg("family"), py::arg("params_json") = "{}", py::arg("seed") = 0);

    m.def(
        "randomized_search",
        [](const std::string& family, const Dataset& train, const std::string& grid_json, std::size_t k,
           std::size_t n_iter, std::uint64_t seed, const std::string& scoring) {
            const ModelFamily fam = parse_model_family(family);
            ParamGrid grid;
            if (grid_json.empty()) grid = default_grid(fam);
            else {
                const json parsed = json::parse(grid_json);
                for (const auto& [name, values] : parsed.items()) grid[name] = values.get<std::vector<json>>();
            }
            py::gil_scoped_release release;
            return randomized_search(fam, grid, train, k, n_iter, seed, parse_scoring(scoring)).to_json().dump();
        },
        py::arg("family"), py::arg("train"), py::arg("grid_json") = "", py::arg("k") = 10, py::arg("n_iter") = 5,
        py::arg("seed") = 0, py::arg("scoring") = "roc_auc");

    m.def(
        "run_experiment",
        [](const std::string& spec_json, const std::string& data_path) {
            const ExperimentSpec spec = spec_from_json(json::parse(spec_json));
            py::gil_scoped_release release;
            return to_json(run_experiment(spec, data_path)).dump();
        },
        py::arg("spec_json"), py::arg("data_path"));
    m.def(
        "run_grid",
        [](const Dataset& raw, const std::string& dataset, std::uint64_t seed, const std::string& out_dir, bool retune) {
            GridOptions opts;
            opts.retune = retune;
            std::string doc;
            {
                py::gil_scoped_release release;
                const GridResult g = run_grid(raw, parse_dataset_id(dataset), seed, opts);
                if (!out_dir.empty()) emit_report(g, out_dir, {{"command", "python"}, {"seed", seed}});
                doc = results_json(g).dump();
            }
            return doc;
        },
        py::arg("raw"), py::arg("dataset"), py::arg("seed") = 0, py::arg("out_dir") = "", py::arg("retune") = false);
    m.def("preset_params", [](const std::string& dataset, const std::string& family) {
        return preset_params(parse_dataset_id(dataset), parse_model_family(family)).dump();
    });
}
