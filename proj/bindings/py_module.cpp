// py_module.cpp — python bindings for the main analytics operations. The
// heavy lifting stays in the C++ library; this layer adapts interfaces to
// python-native types.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wastesig/config.hpp"
#include "wastesig/corpus.hpp"
#include "wastesig/pipeline.hpp"

namespace py = pybind11;
using namespace wastesig;

namespace {

py::dict forecast_dict(const PriceForecast& fc) {
    py::dict d;
    d["hs_code"] = fc.hs_code;
    d["slope"] = fc.slope;
    d["intercept"] = fc.intercept;
    d["horizon_year"] = fc.horizon_year;
    py::list path;
    for (const auto& [year, price] : fc.path) path.append(py::make_tuple(year, price));
    d["path"] = path;
    d["negative_cross_year"] =
        fc.negative_cross_year ? py::cast(*fc.negative_cross_year) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "e-waste trade signature analytics: clustering, waste scoring, forecasting";

    py::class_<KMeansParams>(m, "KMeansParams")
        .def(py::init<>())
        .def_readwrite("k", &KMeansParams::k)
        .def_readwrite("n_restarts", &KMeansParams::n_restarts)
        .def_readwrite("max_iter", &KMeansParams::max_iter)
        .def_readwrite("tol", &KMeansParams::tol)
        .def_readwrite("seed", &KMeansParams::seed);

    py::class_<KMeansResult>(m, "KMeansResult")
        .def_readonly("assignments", &KMeansResult::assignments)
        .def_readonly("centroids", &KMeansResult::centroids)
        .def_readonly("wcss", &KMeansResult::wcss)
        .def_readonly("iterations", &KMeansResult::iterations);

    m.def("kmeans", &kmeans, py::arg("points"), py::arg("params"),
          "Best-of-restarts Lloyd's algorithm with k-means++ seeding.");
    m.def(
        "elbow_select",
        [](const Matrix& points, int k_max, const KMeansParams& params) {
            const auto res = elbow_select(points, k_max, params);
            return py::make_tuple(res.chosen_k, res.wcss_curve);
        },
        py::arg("points"), py::arg("k_max") = 10, py::arg("params") = KMeansParams{},
        "WCSS curve for k = 1..k_max and the second-difference elbow choice.");
    m.def(
        "dbscan",
        [](const Matrix& points, double eps, int min_pts) {
            return dbscan(points, DbscanParams{eps, min_pts});
        },
        py::arg("points"), py::arg("eps"), py::arg("min_pts") = 5,
        "Density clustering; label -1 marks noise.");
    m.def("kdist_eps", &kdist_eps, py::arg("points"), py::arg("k"),
          "Suggested DBSCAN radius from the k-distance curve.");

    m.def(
        "fit_logistic",
        [](const Matrix& x, const std::vector<int>& y, double l2_lambda, int max_iter,
           double tol) {
            const auto model = fit_logistic(x, y, l2_lambda, max_iter, tol);
            py::dict d;
            d["weights"] = model.weights;
            d["intercept"] = model.intercept;
            d["converged"] = model.converged;
            d["n_iter"] = model.n_iter;
            return d;
        },
        py::arg("x"), py::arg("y"), py::arg("l2_lambda") = 1e-3, py::arg("max_iter") = 100,
        py::arg("tol") = 1e-8, "L2-penalized logistic regression via IRLS.");
    m.def(
        "waste_score",
        [](const std::vector<double>& weights, double intercept, const std::vector<double>& z) {
            WasteModel model;
            model.weights = weights;
            model.intercept = intercept;
            model.baseline_means.assign(weights.size(), 0.0);
            return waste_score(model, z);
        },
        py::arg("weights"), py::arg("intercept"), py::arg("z"));
    m.def(
        "linear_shap",
        [](const std::vector<double>& weights, double intercept,
           const std::vector<double>& baseline, const std::vector<double>& z) {
            WasteModel model;
            model.weights = weights;
            model.intercept = intercept;
            model.baseline_means = baseline;
            return linear_shap(model, z);
        },
        py::arg("weights"), py::arg("intercept"), py::arg("baseline"), py::arg("z"),
        "Exact Shapley attributions for the linear model.");
    m.def("scrutiny_score", &scrutiny_score, py::arg("waste"), py::arg("price_trend_z"));

    m.def(
        "run_pipeline",
        [](const std::string& csv_text, const std::string& config_json) {
            const AppConfig cfg =
                config_json.empty() ? default_config() : parse_config(config_json);
            const PipelineResult res = run_pipeline_text(csv_text, cfg);
            py::dict out;
            py::list products;
            for (std::size_t i = 0; i < res.profiles.size(); ++i) {
                py::dict p;
                p["hs_code"] = res.profiles[i].hs_code;
                p["tier"] = to_string(res.segmentation.assignments[i].tier);
                p["dual_confirmed_outlier"] =
                    res.segmentation.assignments[i].dual_confirmed_outlier;
                p["waste_score"] = res.profiles[i].waste_score;
                p["scrutiny_score"] = res.profiles[i].scrutiny_score;
                p["quadrant"] = to_string(res.profiles[i].quadrant);
                p["forecast"] = forecast_dict(res.forecasts[i]);
                products.append(p);
            }
            out["products"] = products;
            out["trendline_slope"] = res.trendline.slope;
            out["trendline_r2"] = res.trendline.r_squared;
            out["oob_accuracy"] = res.forest.oob_accuracy;
            out["training_accuracy"] = res.forest.training_accuracy;
            out["dropped_sparse"] = res.dropped_sparse.size();
            return out;
        },
        py::arg("csv_text"), py::arg("config_json") = std::string(),
        "Full pipeline from raw records text; returns a per-product summary.");

    m.def(
        "synthetic_corpus",
        [](std::uint64_t seed) {
            const Corpus corpus = make_synthetic_corpus(seed);
            py::dict out;
            out["csv"] = corpus_to_csv(corpus);
            out["config_json"] = config_to_json(corpus.config);
            py::list products;
            for (const auto& p : corpus.products) {
                py::dict item;
                item["hs_code"] = p.hs_code;
                item["tier"] = to_string(p.true_tier);
                products.append(item);
            }
            out["products"] = products;
            return out;
        },
        py::arg("seed") = 42, "The pinned 200-product synthetic corpus and its config.");
}
