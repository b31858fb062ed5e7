#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "wmce/asymptotics.hpp"
#include "wmce/autocov.hpp"
#include "wmce/config.hpp"
#include "wmce/errors.hpp"
#include "wmce/harness.hpp"
#include "wmce/sampler.hpp"

namespace py = pybind11;
using namespace wmce;

namespace {

InitialCondition init_from(const py::object& init, std::size_t size) {
  if (init.is_none()) return StationaryInit{};
  if (py::isinstance<py::float_>(init) || py::isinstance<py::int_>(init)) {
    return DeterministicInit{std::vector<double>(size, init.cast<double>())};
  }
  return DeterministicInit{init.cast<std::vector<double>>()};
}

// Rows of equal length become one (N, m) array; refined rows stay a list.
py::object rows_array(const CoordinatePaths& p) {
  const std::size_t m = p.grid_size();
  for (const auto& row : p.rows) {
    if (row.size() != m) {
      py::list out;
      for (const auto& r : p.rows) out.append(py::array_t<double>(r.size(), r.data()));
      return out;
    }
  }
  py::array_t<double> out({p.coordinates(), m});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t k = 0; k < p.coordinates(); ++k) {
    for (std::size_t i = 0; i < m; ++i) view(k, i) = p.rows[k][i];
  }
  return out;
}

CoordinatePaths paths_from(py::array_t<double, py::array::c_style | py::array::forcecast> grid,
                           py::array_t<double, py::array::c_style | py::array::forcecast> rows) {
  if (rows.ndim() != 2) throw ValidationError("rows must be a 2-d array (coordinates, time)");
  CoordinatePaths p;
  p.grid.assign(grid.data(), grid.data() + grid.size());
  const auto n = static_cast<std::size_t>(rows.shape(0));
  const auto m = static_cast<std::size_t>(rows.shape(1));
  p.rows.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.rows[k].assign(rows.data() + k * m, rows.data() + (k + 1) * m);
  p.refinement.assign(n, 1);
  p.validate();
  return p;
}

py::dict summary_dict(const ExperimentSummary& s) {
  py::list rows;
  for (const auto& r : s.rows) {
    py::dict d;
    d["estimator"] = to_string(r.estimator);
    d["N"] = r.n_coords;
    d["replications"] = r.replications;
    d["sum_theta"] = r.sum_theta;
    d["mean_alpha"] = r.mean_alpha;
    d["bias"] = r.bias;
    d["variance"] = r.variance;
    d["rmse"] = r.rmse;
    d["mean_y"] = r.mean_y;
    d["var_y"] = r.var_y;
    d["se_y"] = r.se_y;
    d["standardizer_var"] = r.standardizer_var;
    d["standardizer_source"] = r.standardizer_source;
    d["ks_statistic"] = r.ks_statistic;
    d["ks_pvalue"] = r.ks_pvalue;
    d["standardized_variance"] = r.standardized_variance;
    d["excess_kurtosis_y"] = r.excess_kurtosis_y;
    rows.append(d);
  }
  py::list rates;
  for (const auto& r : s.rates) {
    py::dict d;
    d["estimator"] = to_string(r.estimator);
    d["quantity"] = r.quantity;
    d["regressor"] = r.regressor;
    d["slope"] = r.slope;
    d["intercept"] = r.intercept;
    d["r2"] = r.r2;
    d["points"] = r.points;
    rates.append(d);
  }
  std::ostringstream csv;
  write_summary_csv(s, csv);
  py::dict out;
  out["rows"] = rows;
  out["rates"] = rates;
  out["summary_csv"] = csv.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_wmce, m) {
  m.doc() = "Weighted minimum-contrast drift estimation for diagonal fractional SPDEs";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);

  py::class_<SpectralModel>(m, "SpectralModel")
      .def(py::init<double, double, std::vector<double>, std::vector<double>,
                    std::optional<std::vector<double>>, std::optional<int>>(),
           py::arg("alpha"), py::arg("hurst"), py::arg("thetas"), py::arg("sigmas"),
           py::arg("nus") = py::none(), py::arg("dimension_hint") = py::none())
      .def_property_readonly("alpha", &SpectralModel::alpha)
      .def_property_readonly("hurst", &SpectralModel::hurst)
      .def_property_readonly("thetas",
                             [](const SpectralModel& s) {
                               return std::vector<double>(s.thetas().begin(), s.thetas().end());
                             })
      .def_property_readonly("sigmas",
                             [](const SpectralModel& s) {
                               return std::vector<double>(s.sigmas().begin(), s.sigmas().end());
                             })
      .def("__len__", &SpectralModel::size)
      .def("with_alpha", &SpectralModel::with_alpha)
      .def("__repr__", [](const SpectralModel& s) {
        std::ostringstream os;
        os << "SpectralModel(alpha=" << s.alpha() << ", hurst=" << s.hurst() << ", size=" << s.size()
           << ")";
        return os.str();
      });

  m.def("heat_model", [](int d, std::size_t count, double alpha, double hurst) {
    return SpectralModel(alpha, hurst, heat_eigenvalues(d, count),
                         std::vector<double>(count, 1.0), std::nullopt, d);
  }, py::arg("d"), py::arg("count"), py::arg("alpha") = 1.0, py::arg("hurst") = 0.5,
        "Heat-equation eigenvalues theta_k = k^(2/d) with unit sigmas.");
  m.def("heat_eigenvalues", &heat_eigenvalues, py::arg("d"), py::arg("count"));

  m.def("canonical_autocov", py::vectorize([](double hurst, double t) {
          return canonical_autocov(hurst, t);
        }), py::arg("hurst"), py::arg("t"));
  m.def("coordinate_autocov", [](const SpectralModel& model, std::size_t k, double t) {
    return coordinate_autocov(model, k, t);
  }, py::arg("model"), py::arg("k"), py::arg("t"));

  py::class_<CoordinatePaths>(m, "Paths")
      .def_property_readonly("grid", [](const CoordinatePaths& p) {
        return py::array_t<double>(p.grid.size(), p.grid.data());
      })
      .def_property_readonly("rows", &rows_array)
      .def_readonly("refinement", &CoordinatePaths::refinement)
      .def_readonly("stationary", &CoordinatePaths::stationary)
      .def("save", [](const CoordinatePaths& p, const std::string& file) { save_paths(p, file); })
      .def_static("load", [](const std::string& file) { return load_paths(file); })
      .def_static("from_arrays", &paths_from, py::arg("grid"), py::arg("rows"));

  m.def("sample_paths",
        [](const SpectralModel& model, std::vector<double> grid, std::uint64_t seed,
           std::uint64_t replication, const py::object& init, const std::string& method) {
          const auto init_value = init_from(init, model.size());
          const RngPolicy rng(seed);
          py::gil_scoped_release release;
          return sample_nonstationary_paths(model, init_value, grid, rng,
                                            sampler_method_from_string(method), replication);
        },
        py::arg("model"), py::arg("grid"), py::arg("seed"), py::arg("replication") = 0,
        py::arg("init") = py::none(), py::arg("method") = "auto",
        "Exact Gaussian draw of every coordinate on `grid`. `init` is None for the\n"
        "stationary start, a number, or one value per coordinate.");

  py::class_<EstimateResult>(m, "Estimate")
      .def_readonly("alpha_star", &EstimateResult::alpha_star)
      .def_readonly("y_stat", &EstimateResult::y_stat)
      .def_readonly("n_coords", &EstimateResult::n_coords)
      .def_property_readonly("estimator", [](const EstimateResult& e) { return to_string(e.kind); })
      .def_property_readonly("weights", [](const EstimateResult& e) { return e.weights.weights; })
      .def_property_readonly("normalizer", [](const EstimateResult& e) { return e.weights.normalizer; })
      .def("__repr__", [](const EstimateResult& e) {
        std::ostringstream os;
        os << "Estimate(" << to_string(e.kind) << ", N=" << e.n_coords
           << ", alpha_star=" << e.alpha_star << ")";
        return os.str();
      });

  m.def("wmce_discrete", &wmce_discrete, py::arg("paths"), py::arg("model"), py::arg("N"),
        py::arg("n"));
  m.def("wmce_continuous",
        [](const CoordinatePaths& paths, const SpectralModel& model, std::size_t N, double T,
           double h, double delta) {
          return wmce_continuous(paths, model, N, ContinuousScheme{T, h, delta, 0.0});
        },
        py::arg("paths"), py::arg("model"), py::arg("N"), py::arg("T"), py::arg("h"),
        py::arg("delta") = 0.0);
  m.def("unweighted_mce",
        [](const CoordinatePaths& paths, const SpectralModel& model, std::size_t N, std::size_t n) {
          return unweighted_mce(paths, model, N, DiscreteScheme{n});
        },
        py::arg("paths"), py::arg("model"), py::arg("N"), py::arg("n"));
  m.def("two_term_drift", [](const CoordinatePaths& paths, const SpectralModel& model,
                             std::size_t N, std::size_t n) {
    return wmce_two_term_drift(paths, model, N, n);
  }, py::arg("paths"), py::arg("model"), py::arg("N"), py::arg("n"));

  m.def("predicted_alpha_var_discrete", &predicted_alpha_var_discrete, py::arg("model"),
        py::arg("n"), py::arg("N"));
  m.def("predicted_var_yn_discrete", &predicted_var_yn_discrete, py::arg("model"), py::arg("n"),
        py::arg("N"));

  m.def("run_experiment",
        [](const std::string& config_json, const std::vector<std::string>& overrides,
           unsigned threads) {
          const RunConfig run = parse_config(config_json, overrides);
          ExperimentSummary summary;
          {
            py::gil_scoped_release release;
            summary = run_experiment(run.experiment, threads);
          }
          return summary_dict(summary);
        },
        py::arg("config_json"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("threads") = 0,
        "Runs a seeded Monte Carlo experiment described by a JSON config string.\n"
        "Returns {'rows': [...], 'rates': [...], 'summary_csv': str}.");

  m.def("normalize_config", [](const std::string& config_json,
                               const std::vector<std::string>& overrides) {
    return serialize_config(parse_config(config_json, overrides)).dump();
  }, py::arg("config_json"), py::arg("overrides") = std::vector<std::string>{},
        "Validated, explicit form of a config (thetas and sigmas spelled out).");
}
