#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <numbers>
#include <sstream>

#include "zenodyn/cli.hpp"
#include "zenodyn/dynamics.hpp"
#include "zenodyn/error.hpp"
#include "zenodyn/indicators.hpp"
#include "zenodyn/lindblad.hpp"
#include "zenodyn/model.hpp"
#include "zenodyn/perturbation.hpp"
#include "zenodyn/sweep.hpp"

namespace py = pybind11;
using namespace zenodyn;

namespace {

Indicator indicator_from(const std::string& name) { return parse_indicator(name); }

SweepGrid sweep_three_state(double g1, double g2, double epsilon, double omega, std::pair<double, double> delta_range,
                            int delta_n, const std::string& delta_scale, std::pair<double, double> phi_range,
                            int phi_n, const CVector& initial, double horizon, int n_time,
                            const std::vector<std::string>& which, unsigned threads) {
  SweepSpec spec;
  spec.delta = Axis{delta_range.first, delta_range.second, delta_n,
                    delta_scale == "linear" ? AxisScale::Linear : AxisScale::Log};
  if (delta_scale != "linear" && delta_scale != "log") {
    throw Error(ErrorKind::InvalidInput, "delta_scale must be 'log' or 'linear'");
  }
  spec.phi = Axis{phi_range.first, phi_range.second, phi_n, AxisScale::Linear};
  spec.family = three_state_family(g1, g2, epsilon, omega);
  spec.indicator_cfg.initial = initial;
  spec.indicator_cfg.horizon = horizon;
  spec.indicator_cfg.n_time = n_time;
  spec.which.clear();
  for (const auto& w : which) spec.which.push_back(indicator_from(w));
  spec.threads = threads;
  py::gil_scoped_release release;
  return run_sweep(spec);
}

IndicatorConfig make_config(const CVector& initial, double horizon, int n_time) {
  IndicatorConfig cfg;
  cfg.initial = initial;
  cfg.horizon = horizon;
  cfg.n_time = n_time;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-Hermitian effective dynamics, master-equation checks and Zeno indicators";

  static py::exception<Error> error_type(m, "ZenodynError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<DiagonalEntry>(m, "DiagonalEntry")
      .def(py::init<double, double>(), py::arg("delta"), py::arg("phi"))
      .def_readwrite("delta", &DiagonalEntry::delta)
      .def_readwrite("phi", &DiagonalEntry::phi)
      .def("value", &DiagonalEntry::value)
      .def_property_readonly("energy", &DiagonalEntry::energy)
      .def_property_readonly("decay_rate", &DiagonalEntry::decay_rate);

  py::class_<NonHermitianHamiltonian>(m, "NonHermitianHamiltonian")
      .def(py::init([](std::vector<DiagonalEntry> diag_a, std::vector<double> diag_b, CMatrix coupling,
                       CMatrix intra_b) {
             NonHermitianHamiltonian h{std::move(diag_a), std::move(diag_b), std::move(coupling), std::move(intra_b)};
             h.validate();
             return h;
           }),
           py::arg("diag_a"), py::arg("diag_b"), py::arg("coupling") = CMatrix(), py::arg("intra_b") = CMatrix())
      .def_readwrite("diag_a", &NonHermitianHamiltonian::diag_a)
      .def_readwrite("diag_b", &NonHermitianHamiltonian::diag_b)
      .def_readwrite("coupling", &NonHermitianHamiltonian::coupling)
      .def_readwrite("intra_b", &NonHermitianHamiltonian::intra_b)
      .def_property_readonly("dim_a", &NonHermitianHamiltonian::dim_a)
      .def_property_readonly("dim_b", &NonHermitianHamiltonian::dim_b)
      .def_property_readonly("dim", &NonHermitianHamiltonian::dim)
      .def("validate", &NonHermitianHamiltonian::validate);

  py::class_<SeparationReport>(m, "SeparationReport")
      .def_readonly("delta_gap", &SeparationReport::delta_gap)
      .def_readonly("c_max", &SeparationReport::c_max)
      .def_readonly("ratio", &SeparationReport::ratio);

  m.def("three_state", &three_state, py::arg("delta"), py::arg("phi"), py::arg("g1"), py::arg("g2"),
        py::arg("epsilon") = 1.0, py::arg("omega") = 0.0);
  m.def("assemble", &assemble);
  m.def("unperturbed", &unperturbed);
  m.def("hermitianize", &hermitianize);
  m.def("separation", &separation);

  py::class_<SpectralData>(m, "SpectralData")
      .def_readonly("eigenvalues", &SpectralData::eigenvalues)
      .def_readonly("right", &SpectralData::right)
      .def_readonly("left", &SpectralData::left)
      .def_readonly("right_residuals", &SpectralData::right_residuals)
      .def_readonly("left_residuals", &SpectralData::left_residuals);

  m.def("expm", &expm, py::arg("m"), py::arg("t"), "exp(-i m t)");
  m.def("eig_general", &eig_general);
  m.def("solve_linear", &solve_linear);

  m.def("propagate_state", &propagate_state, py::arg("h"), py::arg("psi0"), py::arg("t"));
  m.def("propagate_density", &propagate_density, py::arg("h"), py::arg("rho0"), py::arg("t"));
  m.def("propagate_unperturbed", &propagate_unperturbed, py::arg("h0"), py::arg("dim_a"), py::arg("psi0"),
        py::arg("t"));
  m.def("spectral_propagate", &spectral_propagate);

  py::class_<Jump>(m, "Jump")
      .def(py::init<Eigen::Index, Eigen::Index, double>(), py::arg("k"), py::arg("j"), py::arg("gamma"))
      .def_readwrite("k", &Jump::k)
      .def_readwrite("j", &Jump::j)
      .def_readwrite("gamma", &Jump::gamma);

  py::class_<OpenSystemModel>(m, "OpenSystemModel")
      .def(py::init([](Eigen::Index dim_r, Eigen::Index dim_g, CMatrix h_s, std::vector<Jump> jumps) {
             OpenSystemModel model{dim_r, dim_g, std::move(h_s), std::move(jumps)};
             model.validate();
             return model;
           }),
           py::arg("dim_r"), py::arg("dim_g"), py::arg("h_s"), py::arg("jumps"))
      .def_readonly("dim_r", &OpenSystemModel::dim_r)
      .def_readonly("dim_g", &OpenSystemModel::dim_g)
      .def_readonly("h_s", &OpenSystemModel::h_s)
      .def_readonly("jumps", &OpenSystemModel::jumps);

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_readonly("max_deviation", &EquivalenceReport::max_deviation)
      .def_readonly("max_trace_error", &EquivalenceReport::max_trace_error)
      .def_readonly("final_r_population", &EquivalenceReport::final_r_population)
      .def_readonly("samples", &EquivalenceReport::samples);

  m.def("liouvillian_apply", &liouvillian_apply);
  m.def(
      "integrate",
      [](const OpenSystemModel& model, const CMatrix& rho0, double t, double dt) {
        return integrate(model, rho0, t, dt);
      },
      py::arg("model"), py::arg("rho0"), py::arg("t"), py::arg("dt") = 1e-3);
  m.def("reduce_to_r", &reduce_to_R);
  m.def("equivalence_check", &equivalence_check, py::arg("model"), py::arg("rho0_r"), py::arg("t"),
        py::arg("dt") = 1e-3, py::arg("n_samples") = 101);
  m.def("open_system_from", &open_system_from, py::arg("h"), py::arg("dim_g") = 1);

  py::class_<PerturbativeSpectrum>(m, "PerturbativeSpectrum")
      .def_readonly("order", &PerturbativeSpectrum::order)
      .def_readonly("vector_order", &PerturbativeSpectrum::vector_order)
      .def_readonly("alpha", &PerturbativeSpectrum::alpha)
      .def_readonly("beta", &PerturbativeSpectrum::beta)
      .def_readonly("right_alpha", &PerturbativeSpectrum::right_alpha)
      .def_readonly("left_alpha", &PerturbativeSpectrum::left_alpha)
      .def_readonly("right_beta", &PerturbativeSpectrum::right_beta)
      .def_readonly("left_beta", &PerturbativeSpectrum::left_beta)
      .def_readonly("b_energies", &PerturbativeSpectrum::b_energies)
      .def_readonly("separation", &PerturbativeSpectrum::separation);

  m.def("correct_first_order", &correct_first_order);
  m.def("correct_second_order_eigenvalues", &correct_second_order_eigenvalues);
  m.def("correct_second_order_vectors", &correct_second_order_vectors);
  m.def("effective_decay_rates", &effective_decay_rates);

  py::class_<FidelityTrace>(m, "FidelityTrace")
      .def_readonly("times", &FidelityTrace::times)
      .def_readonly("f_raw", &FidelityTrace::f_raw)
      .def_readonly("f_norm", &FidelityTrace::f_norm)
      .def_readonly("f_zeta", &FidelityTrace::f_zeta)
      .def_readonly("F", &FidelityTrace::F)
      .def_readonly("F_bar", &FidelityTrace::F_bar)
      .def_readonly("F_tilde", &FidelityTrace::F_tilde)
      .def_readonly("masked", &FidelityTrace::masked)
      .def_property_readonly("zeno_class", [](const FidelityTrace& t) { return std::string(to_string(t.zeno_class)); });

  m.def(
      "indicators",
      [](const NonHermitianHamiltonian& h, const CVector& initial, double horizon, int n_time) {
        return compute_trace(h, make_config(initial, horizon, n_time));
      },
      py::arg("h"), py::arg("initial"), py::arg("horizon") = 2 * std::numbers::pi, py::arg("n_time") = 2001);

  py::class_<SweepGrid>(m, "SweepGrid")
      .def_readonly("delta_values", &SweepGrid::delta_values)
      .def_readonly("phi_values", &SweepGrid::phi_values)
      .def_property_readonly("indicators",
                             [](const SweepGrid& g) {
                               std::vector<std::string> names;
                               for (Indicator w : g.which) names.emplace_back(column_name(w));
                               return names;
                             })
      .def(
          "values",
          [](const SweepGrid& g, const std::string& name) {
            const Indicator w = indicator_from(name);
            Eigen::MatrixXd out(g.delta_values.size(), g.phi_values.size());
            for (std::size_t i = 0; i < g.delta_values.size(); ++i) {
              for (std::size_t j = 0; j < g.phi_values.size(); ++j) out(i, j) = g.at(w, i, j);
            }
            return out;
          },
          "Indicator values as a (n_delta, n_phi) array")
      .def_readonly("error_mask", &SweepGrid::error_mask)
      .def_readonly("errors", &SweepGrid::errors)
      .def_readonly("n_failed", &SweepGrid::n_failed)
      .def_readonly("config_hash", &SweepGrid::config_hash)
      .def("to_csv", &to_csv)
      .def("to_json", &to_json);

  m.def("sweep_three_state", &sweep_three_state, py::arg("g1"), py::arg("g2"), py::arg("epsilon") = 1.0,
        py::arg("omega") = 0.0, py::arg("delta_range") = std::pair{0.1, 100.0}, py::arg("delta_n") = 121,
        py::arg("delta_scale") = "log", py::arg("phi_range") = std::pair{0.0, std::numbers::pi},
        py::arg("phi_n") = 97, py::arg("initial"), py::arg("horizon") = 2 * std::numbers::pi,
        py::arg("n_time") = 2001, py::arg("which") = std::vector<std::string>{"F", "F_bar", "F_tilde", "masked"},
        py::arg("threads") = 0u);

  m.def(
      "cli_run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "Runs the command line front end in-process; returns (exit_code, stdout, stderr)");
}
