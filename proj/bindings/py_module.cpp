#include "tsd/baselines.hpp"
#include "tsd/core.hpp"
#include "tsd/eval.hpp"
#include "tsd/graph.hpp"
#include "tsd/solver.hpp"
#include "tsd/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace tsd;

namespace {

std::vector<Date> parse_dates(const std::vector<std::string>& iso) {
  std::vector<Date> out;
  out.reserve(iso.size());
  for (const auto& s : iso) out.push_back(parse_date(s));
  return out;
}

ChemDataset make_dataset(const Matrix& features, const Vector& target,
                         const Vector& latitude, const Vector& longitude,
                         const std::vector<std::string>& dates,
                         const std::vector<std::string>& analyte_names,
                         const std::string& target_name,
                         const std::vector<std::string>& sample_ids) {
  ChemDataset ds;
  ds.features = features;
  ds.target = target;
  ds.latitude = latitude;
  ds.longitude = longitude;
  ds.timestamp = parse_dates(dates);
  ds.analyte_names = analyte_names;
  ds.target_name = target_name;
  if (sample_ids.empty()) {
    for (int i = 0; i < features.rows(); ++i) {
      ds.sample_ids.push_back("s" + std::to_string(i));
    }
  } else {
    ds.sample_ids = sample_ids;
  }
  ds.preprocess.scaling = Scaling::none;
  ds.preprocess.scale_params.assign(features.cols(), {0.0, 1.0});
  ds.validate();
  return ds;
}

}  // namespace

PYBIND11_MODULE(_tsd, m) {
  m.doc() = "Joint target prediction and nonnegative source detection with "
            "spatial/temporal graph regularization";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

  py::class_<Hyperparams>(m, "Hyperparams")
      .def(py::init<>())
      .def_readwrite("lambda_x", &Hyperparams::lambda_x)
      .def_readwrite("lambda_w_l1", &Hyperparams::lambda_w_l1)
      .def_readwrite("lambda_w_l2", &Hyperparams::lambda_w_l2)
      .def_readwrite("lambda_a_l1", &Hyperparams::lambda_a_l1)
      .def_readwrite("lambda_a_l2", &Hyperparams::lambda_a_l2)
      .def_readwrite("lambda_d_l1", &Hyperparams::lambda_d_l1)
      .def_readwrite("lambda_d_l2", &Hyperparams::lambda_d_l2)
      .def_readwrite("lambda_s", &Hyperparams::lambda_s)
      .def_readwrite("lambda_t", &Hyperparams::lambda_t)
      .def_readwrite("rho_w", &Hyperparams::rho_w)
      .def_readwrite("rho_d1", &Hyperparams::rho_d1)
      .def_readwrite("rho_d2", &Hyperparams::rho_d2)
      .def_readwrite("rho_a1", &Hyperparams::rho_a1)
      .def_readwrite("rho_a2", &Hyperparams::rho_a2)
      .def_readwrite("k_sources", &Hyperparams::k_sources)
      .def_readwrite("max_iters", &Hyperparams::max_iters)
      .def_readwrite("tol", &Hyperparams::tol)
      .def_readwrite("seed", &Hyperparams::seed);

  py::class_<Factorization>(m, "Factorization")
      .def(py::init<>())
      .def(py::init([](Matrix d, Matrix a, Vector w) {
             return Factorization{std::move(d), std::move(a), std::move(w)};
           }),
           py::arg("D"), py::arg("A"), py::arg("W"))
      .def_readwrite("D", &Factorization::D)
      .def_readwrite("A", &Factorization::A)
      .def_readwrite("W", &Factorization::W)
      .def_property_readonly("k_sources", &Factorization::k_sources);

  py::class_<ChemDataset>(m, "ChemDataset")
      .def(py::init(&make_dataset), py::arg("features"), py::arg("target"),
           py::arg("latitude"), py::arg("longitude"), py::arg("dates"),
           py::arg("analyte_names"), py::arg("target_name") = "target",
           py::arg("sample_ids") = std::vector<std::string>{})
      .def_readonly("features", &ChemDataset::features)
      .def_readonly("target", &ChemDataset::target)
      .def_readonly("latitude", &ChemDataset::latitude)
      .def_readonly("longitude", &ChemDataset::longitude)
      .def_readonly("analyte_names", &ChemDataset::analyte_names)
      .def_readonly("target_name", &ChemDataset::target_name)
      .def_readonly("sample_ids", &ChemDataset::sample_ids)
      .def_property_readonly("n_samples", &ChemDataset::n_samples)
      .def_property_readonly("n_analytes", &ChemDataset::n_analytes)
      .def_property_readonly("dates", [](const ChemDataset& ds) {
        std::vector<std::string> out;
        for (const auto& d : ds.timestamp) out.push_back(format_date(d));
        return out;
      });

  py::class_<GraphLaplacian>(m, "GraphLaplacian")
      .def_readonly("n", &GraphLaplacian::n)
      .def("quadratic", &laplacian_quadratic, py::arg("A"))
      .def("adjacency_coo", [](const GraphLaplacian& g) {
        std::ostringstream out;
        g.write_adjacency_coo(out);
        return out.str();
      })
      .def_property_readonly(
          "laplacian_dense",
          [](const GraphLaplacian& g) { return Matrix(g.laplacian); });

  py::class_<FitReport>(m, "FitReport")
      .def_readonly("objective_trace", &FitReport::objective_trace)
      .def_readonly("iterations", &FitReport::iterations)
      .def_readonly("converged", &FitReport::converged)
      .def_readonly("train_rmse", &FitReport::train_rmse)
      .def_readonly("residual_w", &FitReport::residual_w)
      .def_readonly("residual_d1", &FitReport::residual_d1)
      .def_readonly("residual_d2", &FitReport::residual_d2)
      .def_readonly("residual_a1", &FitReport::residual_a1)
      .def_readonly("residual_a2", &FitReport::residual_a2)
      .def_readonly("notes", &FitReport::notes);

  py::class_<SynthSpec>(m, "SynthSpec")
      .def(py::init<>())
      .def_readwrite("n_samples", &SynthSpec::n_samples)
      .def_readwrite("n_analytes", &SynthSpec::n_analytes)
      .def_readwrite("k_sources", &SynthSpec::k_sources)
      .def_readwrite("noise_std", &SynthSpec::noise_std)
      .def_readwrite("smoothness", &SynthSpec::smoothness)
      .def_readwrite("seasonal_amplitude", &SynthSpec::seasonal_amplitude)
      .def_readwrite("seed", &SynthSpec::seed);

  m.def("spatial_laplacian", &spatial_laplacian, py::arg("latitude"),
        py::arg("longitude"), py::arg("k_neighbors"),
        py::arg("kernel_bandwidth") = std::nullopt);
  m.def(
      "temporal_laplacian",
      [](const std::vector<std::string>& dates, int window_days,
         int period_days) {
        return temporal_laplacian(parse_dates(dates), window_days, period_days);
      },
      py::arg("dates"), py::arg("window_days"), py::arg("period_days") = 365);
  m.def("haversine_m", &haversine_m);
  m.def("circular_day_distance", &circular_day_distance, py::arg("doy_a"),
        py::arg("doy_b"), py::arg("period_days") = 365);

  m.def("objective",
        py::overload_cast<const Matrix&, const Vector&, const Factorization&,
                          const Hyperparams&, const GraphLaplacian&,
                          const GraphLaplacian&>(&objective),
        py::arg("features"), py::arg("target"), py::arg("factorization"),
        py::arg("hyperparams"), py::arg("laplacian_s"), py::arg("laplacian_t"));
  m.def("soft_threshold", py::overload_cast<const Matrix&, double>(&soft_threshold));
  m.def("predict", &predict, py::arg("factorization"), py::arg("A_new"));
  m.def(
      "encode",
      [](const Matrix& x, const Factorization& f, const Hyperparams& h) {
        return encode(x, f, h);
      },
      py::arg("features"), py::arg("factorization"), py::arg("hyperparams"));
  m.def(
      "fit",
      [](const ChemDataset& ds, const Hyperparams& h, const GraphLaplacian& ls,
         const GraphLaplacian& lt, bool fit_w) {
        FitOptions opt;
        opt.fit_w = fit_w;
        return fit(ds, h, ls, lt, opt);
      },
      py::arg("dataset"), py::arg("hyperparams"), py::arg("laplacian_s"),
      py::arg("laplacian_t"), py::arg("fit_w") = true);

  m.def(
      "nmf",
      [](const Matrix& x, int k, int max_iters, double tol, std::uint64_t seed) {
        NmfResult res = nmf(x, k, max_iters, tol, seed);
        return py::make_tuple(res.A, res.D, res.error_trace);
      },
      py::arg("X"), py::arg("k"), py::arg("max_iters") = 200,
      py::arg("tol") = 1e-6, py::arg("seed") = 0);
  m.def(
      "ridge",
      [](const Matrix& x, const Vector& y, double lambda_l2) {
        return ridge(x, y, lambda_l2);
      },
      py::arg("X"), py::arg("y"), py::arg("lambda_l2"));

  m.def("rmse", &rmse, py::arg("y_pred"), py::arg("y_true"));

  m.def(
      "generate",
      [](const SynthSpec& spec) {
        SynthData data = generate(spec);
        return py::make_tuple(data.dataset, data.a_true, data.d_true,
                              data.w_true);
      },
      py::arg("spec"));
  m.def(
      "match_sources",
      [](const Matrix& d_learned, const Matrix& d_true) {
        SourceMatch match = match_sources(d_learned, d_true);
        return py::make_tuple(match.permutation, match.similarities,
                              match.mean_similarity);
      },
      py::arg("D_learned"), py::arg("D_true"));
}
