#include "zenodyn/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zenodyn/dynamics.hpp"
#include "zenodyn/indicators.hpp"
#include "zenodyn/io.hpp"
#include "zenodyn/lindblad.hpp"
#include "zenodyn/perturbation.hpp"
#include "zenodyn/sweep.hpp"

namespace zenodyn::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double delta = 5.0;
  double phi = std::numbers::pi / 2;
  double g1 = 0.2;
  double g2 = 0.2;
  double epsilon = 1.0;
  double omega = 0.1;
  std::string initial = "2";
  double horizon = 2 * std::numbers::pi;
  int n_time = 2001;
  double dt = 1e-3;
  std::string model;
  std::string out;
  std::string format = "csv";

  double threshold = 1e-6;
  int samples = 101;

  double ezd = 0.95;
  double anti_zeno = -0.02;
  std::string trace;

  double delta_min = 0.1;
  double delta_max = 100.0;
  int delta_n = 121;
  std::string delta_scale = "log";
  double phi_min = 0.0;
  double phi_max = std::numbers::pi;
  int phi_n = 97;
  std::string indicators = "F,F_bar,F_tilde,masked";
  unsigned threads = 0;

  bool inline_flag_given = false;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Rows of numbers or strings, rendered as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::string render(const std::string& format) const {
    std::ostringstream s;
    if (format == "json") {
      nlohmann::json j;
      j["columns"] = columns;
      j["rows"] = rows;
      s << j.dump(2) << '\n';
      return s.str();
    }
    for (std::size_t c = 0; c < columns.size(); ++c) s << (c ? "," : "") << columns[c];
    s << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) s << ',';
        if (row[c].is_number()) {
          s << fmt(row[c].get<double>());
        } else if (row[c].is_string()) {
          s << row[c].get<std::string>();
        }
      }
      s << '\n';
    }
    return s.str();
  }
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty() || cfg.out == "-") {
    out << text;
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorKind::IOError, "cannot open '" + cfg.out + "' for writing");
  file << text;
  if (!file.flush()) throw Error(ErrorKind::IOError, "write to '" + cfg.out + "' failed");
}

struct ResolvedModel {
  NonHermitianHamiltonian hamiltonian;
  std::optional<ModelFile> file;
};

ResolvedModel resolve_model(const RunConfig& cfg) {
  if (!cfg.model.empty() && cfg.inline_flag_given) {
    throw UsageError("--model cannot be combined with inline three-state flags");
  }
  if (!(cfg.epsilon > 0.0)) throw UsageError("--epsilon must be positive");
  ResolvedModel r;
  if (!cfg.model.empty()) {
    try {
      r.file = load_model_file(cfg.model);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    r.hamiltonian = r.file->hamiltonian;
  } else {
    const double e = cfg.epsilon;
    r.hamiltonian = three_state(cfg.delta * e, cfg.phi, cfg.g1 * e, cfg.g2 * e, e, cfg.omega * e);
  }
  return r;
}

StateVector parse_initial(const std::string& text, Eigen::Index dim) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--initial: cannot parse '" + item + "'");
    }
  }
  StateVector psi = StateVector::Zero(dim);
  if (parts.size() == 1 && text.find(',') == std::string::npos) {
    const double label = parts.front();
    if (label != std::floor(label) || label < 1 || label > static_cast<double>(dim)) {
      throw UsageError("--initial: basis label must be an integer in 1.." + std::to_string(dim));
    }
    psi(static_cast<Eigen::Index>(label) - 1) = 1.0;
    return psi;
  }
  if (static_cast<Eigen::Index>(parts.size()) != dim) {
    throw UsageError("--initial: expected " + std::to_string(dim) + " amplitudes");
  }
  for (Eigen::Index k = 0; k < dim; ++k) psi(k) = parts[static_cast<std::size_t>(k)];
  if (psi.norm() == 0.0) throw UsageError("--initial: zero state");
  return psi / psi.norm();
}

IndicatorConfig indicator_config(const RunConfig& cfg, Eigen::Index dim) {
  if (cfg.n_time < 2) throw UsageError("--n-time must be >= 2");
  IndicatorConfig ic;
  ic.horizon = cfg.horizon / cfg.epsilon;
  ic.n_time = cfg.n_time;
  ic.initial = parse_initial(cfg.initial, dim);
  ic.thresholds = ZenoThresholds{cfg.ezd, cfg.anti_zeno};
  return ic;
}

void check_format(const RunConfig& cfg) {
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

// ---- commands --------------------------------------------------------------

int cmd_propagate(const RunConfig& cfg, std::ostream& out) {
  const ResolvedModel m = resolve_model(cfg);
  const IndicatorConfig ic = indicator_config(cfg, m.hamiltonian.dim());
  const Eigen::Index n = m.hamiltonian.dim();
  const Eigen::Index na = m.hamiltonian.dim_a();

  const auto psi = StepPropagator(assemble(m.hamiltonian), ic.dt()).series(ic.initial, ic.n_time);
  const auto psi0 = StepPropagator(unperturbed(m.hamiltonian), ic.dt()).series(ic.initial, ic.n_time);

  Table t;
  t.columns.push_back("t");
  for (const char* name : {"psi", "psi0"}) {
    for (Eigen::Index k = 1; k <= n; ++k) {
      t.columns.push_back(std::string(name) + "_re_" + std::to_string(k));
      t.columns.push_back(std::string(name) + "_im_" + std::to_string(k));
    }
  }
  for (const char* c : {"norm2_psi", "norm2_psi0", "pop_b_psi", "pop_b_psi0"}) t.columns.push_back(c);

  for (std::size_t s = 0; s < psi.size(); ++s) {
    std::vector<nlohmann::json> row{static_cast<double>(s) * ic.dt()};
    for (const auto* v : {&psi[s], &psi0[s]}) {
      for (Eigen::Index k = 0; k < n; ++k) {
        row.emplace_back((*v)(k).real());
        row.emplace_back((*v)(k).imag());
      }
    }
    row.emplace_back(psi[s].squaredNorm());
    row.emplace_back(psi0[s].squaredNorm());
    row.emplace_back(psi[s].tail(n - na).squaredNorm());
    row.emplace_back(psi0[s].tail(n - na).squaredNorm());
    t.rows.push_back(std::move(row));
  }
  emit(cfg, t.render(cfg.format), out);
  return kExitOk;
}

int cmd_lindblad_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ResolvedModel m = resolve_model(cfg);
  OpenSystemModel model;
  try {
    model = m.file ? open_system_from_json(*m.file) : open_system_from(m.hamiltonian, 1);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const StateVector psi = parse_initial(cfg.initial, model.dim_r);
  if (cfg.samples < 2) throw UsageError("--samples must be >= 2");
  if (!(cfg.dt > 0.0)) throw UsageError("--dt must be positive");

  const CMatrix rho0 = psi * psi.adjoint();
  const EquivalenceReport r = equivalence_check(model, rho0, cfg.horizon / cfg.epsilon,
                                                cfg.dt / cfg.epsilon,
                                                static_cast<std::size_t>(cfg.samples));
  const bool pass = r.max_deviation <= cfg.threshold;

  Table t;
  t.columns = {"max_deviation", "max_trace_error", "final_r_population", "threshold", "status"};
  t.rows.push_back({r.max_deviation, r.max_trace_error, r.final_r_population, cfg.threshold,
                    pass ? "PASS" : "FAIL"});
  emit(cfg, t.render(cfg.format), out);
  if (!pass) err << "lindblad-check: deviation " << fmt(r.max_deviation) << " exceeds threshold\n";
  return pass ? kExitOk : kExitNumerical;
}

int cmd_perturb(const RunConfig& cfg, std::ostream& out) {
  const ResolvedModel m = resolve_model(cfg);
  const NonHermitianHamiltonian& h = m.hamiltonian;
  const PerturbativeSpectrum first = correct_first_order(h);
  const PerturbativeSpectrum second = correct_second_order_eigenvalues(h);
  const std::vector<double> rates = effective_decay_rates(h);
  const SpectralData exact = eig_general(assemble(h));

  Table t;
  t.columns = {"branch",   "index",    "exact_re", "exact_im", "order1_re", "order1_im",
               "order2_re", "order2_im", "err1",     "err2",     "im_beta_closed_form"};
  std::vector<bool> used(static_cast<std::size_t>(exact.dim()), false);
  auto add = [&](const char* branch, Eigen::Index k, Complex o1, Complex o2, std::optional<double> rate) {
    Eigen::Index best = -1;
    for (Eigen::Index e = 0; e < exact.dim(); ++e) {
      if (used[static_cast<std::size_t>(e)]) continue;
      if (best < 0 || std::abs(exact.eigenvalues(e) - o2) < std::abs(exact.eigenvalues(best) - o2)) best = e;
    }
    used[static_cast<std::size_t>(best)] = true;
    const Complex ex = exact.eigenvalues(best);
    t.rows.push_back({branch, static_cast<double>(k + 1), ex.real(), ex.imag(), o1.real(), o1.imag(),
                      o2.real(), o2.imag(), std::abs(o1 - ex), std::abs(o2 - ex),
                      rate ? nlohmann::json(*rate) : nlohmann::json("")});
  };
  for (Eigen::Index k = 0; k < h.dim_a(); ++k) add("A", k, first.alpha(k), second.alpha(k), std::nullopt);
  for (Eigen::Index k = 0; k < h.dim_b(); ++k) {
    add("B", k, first.beta(k), second.beta(k), rates[static_cast<std::size_t>(k)]);
  }
  emit(cfg, t.render(cfg.format), out);
  return kExitOk;
}

int cmd_indicators(const RunConfig& cfg, std::ostream& out) {
  const ResolvedModel m = resolve_model(cfg);
  const IndicatorConfig ic = indicator_config(cfg, m.hamiltonian.dim());
  const FidelityTrace tr = compute_trace(m.hamiltonian, ic);

  Table t;
  t.columns = {"F", "F_bar", "F_tilde", "masked", "zeno_class"};
  t.rows.push_back({tr.F, tr.F_bar, tr.F_tilde, tr.masked, std::string(to_string(tr.zeno_class))});
  emit(cfg, t.render(cfg.format), out);

  if (!cfg.trace.empty()) {
    Table series;
    series.columns = {"t", "f_raw", "f_norm", "f_zeta"};
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      series.rows.push_back({tr.times[k], tr.f_raw[k], tr.f_norm[k], tr.f_zeta[k]});
    }
    std::ofstream file(cfg.trace, std::ios::binary | std::ios::trunc);
    if (!file) throw Error(ErrorKind::IOError, "cannot open '" + cfg.trace + "' for writing");
    file << series.render("csv");
  }
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ResolvedModel m = resolve_model(cfg);
  SweepSpec spec;
  const auto scale = [](const std::string& s) {
    if (s == "log") return AxisScale::Log;
    if (s == "linear") return AxisScale::Linear;
    throw UsageError("--delta-scale must be log or linear");
  };
  spec.delta = Axis{cfg.delta_min, cfg.delta_max, cfg.delta_n, scale(cfg.delta_scale)};
  spec.phi = Axis{cfg.phi_min, cfg.phi_max, cfg.phi_n, AxisScale::Linear};
  if (m.file) {
    spec.family = model_family(m.hamiltonian, m.file->swept, cfg.epsilon, m.file->source.dump());
  } else {
    const double e = cfg.epsilon;
    spec.family = three_state_family(cfg.g1 * e, cfg.g2 * e, e, cfg.omega * e);
  }
  spec.indicator_cfg = indicator_config(cfg, m.hamiltonian.dim());
  spec.which.clear();
  std::stringstream ss(cfg.indicators);
  std::string name;
  while (std::getline(ss, name, ',')) {
    try {
      spec.which.push_back(parse_indicator(name));
    } catch (const Error& e) {
      throw UsageError(std::string("--indicators: ") + e.what());
    }
  }
  spec.threads = cfg.threads;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  const SweepGrid grid = run_sweep(spec);
  emit(cfg, cfg.format == "json" ? to_json(grid) : to_csv(grid), out);

  std::ostream& summary = (cfg.out.empty() || cfg.out == "-") ? err : out;
  summary << "sweep " << grid.delta_values.size() << "x" << grid.phi_values.size()
          << " hash=" << grid.config_hash;
  for (std::size_t w = 0; w < grid.which.size(); ++w) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (double v : grid.values[w]) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    summary << ' ' << column_name(grid.which[w]) << "=[" << fmt(lo) << ',' << fmt(hi) << ']';
  }
  summary << " failed_cells=" << grid.n_failed << '\n';
  for (const auto& e : grid.errors) summary << "  " << e << '\n';
  return kExitOk;
}

// ---- option wiring ----------------------------------------------------------

void add_model_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--delta", cfg.delta, "Modulus Delta of the decaying level (units of epsilon)");
  sub.add_option("--phi", cfg.phi, "Phase phi of the decaying level, radians in [0, pi]");
  sub.add_option("--g1", cfg.g1, "Coupling |1>-|2> (units of epsilon)");
  sub.add_option("--g2", cfg.g2, "Coupling |1>-|3> (units of epsilon)");
  sub.add_option("--omega", cfg.omega, "Coupling |2>-|3> (units of epsilon)");
  sub.add_option("--epsilon", cfg.epsilon, "Energy unit epsilon (energy of |2>)");
  sub.add_option("--model", cfg.model, "JSON model file (replaces the inline three-state flags)");
  sub.add_option("--initial", cfg.initial, "Initial state: basis label (\"2\") or amplitudes (\"0,1,0\")");
  sub.add_option("--out", cfg.out, "Output path (default: standard output)");
  sub.add_option("--format", cfg.format, "Output format: csv or json");
  sub.footer("All energies are in units of epsilon and times in units of 1/epsilon.");
}

void add_time_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--horizon", cfg.horizon, "Time horizon T * epsilon (default 2 pi)");
  sub.add_option("--n-time", cfg.n_time, "Number of uniform time samples in [0, T]");
}

void add_threshold_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--ezd-threshold", cfg.ezd, "F at or above this is classified EZD");
  sub.add_option("--anti-zeno-threshold", cfg.anti_zeno, "F_tilde below this is anti-Zeno-leaning");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Non-Hermitian Hamiltonian dynamics, master-equation checks and extended Zeno indicators"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print the flags of every command and exit");
  app.footer("Run '<command> --help' for the flags of one command, or --help-all for all of them.");

  CLI::App* propagate = app.add_subcommand("propagate", "Trajectory table of psi(t) under H and psi0(t) under H0");
  CLI::App* check = app.add_subcommand("lindblad-check", "Compare the non-Hermitian reduction with the full master equation");
  CLI::App* perturb = app.add_subcommand("perturb", "Exact vs first/second-order perturbative eigenvalues");
  CLI::App* indicators = app.add_subcommand("indicators", "Fidelity indicators F, F_bar, F_tilde and the masked map");
  CLI::App* sweep = app.add_subcommand("sweep", "Indicators on a (Delta, phi) grid");

  for (CLI::App* sub : {propagate, check, perturb, indicators, sweep}) add_model_options(*sub, cfg);
  for (CLI::App* sub : {propagate, check, indicators, sweep}) add_time_options(*sub, cfg);
  for (CLI::App* sub : {indicators, sweep}) add_threshold_options(*sub, cfg);

  propagate->footer(
      "Columns: t, psi_re_k/psi_im_k and psi0_re_k/psi0_im_k per basis state k, "
      "norm2_psi, norm2_psi0 (squared norms), pop_b_psi, pop_b_psi0 (B populations).\n"
      "All energies are in units of epsilon and times in units of 1/epsilon.");
  check->add_option("--dt", cfg.dt, "Integrator step (units of 1/epsilon)");
  check->add_option("--samples", cfg.samples, "Comparison times in [0, T]");
  check->add_option("--threshold", cfg.threshold, "Maximum Frobenius deviation for PASS");
  indicators->add_option("--trace", cfg.trace, "Also write the per-time series (t,f_raw,f_norm,f_zeta) as CSV");
  sweep->add_option("--delta-min", cfg.delta_min, "Smallest Delta / epsilon");
  sweep->add_option("--delta-max", cfg.delta_max, "Largest Delta / epsilon");
  sweep->add_option("--delta-n", cfg.delta_n, "Number of Delta points");
  sweep->add_option("--delta-scale", cfg.delta_scale, "Delta spacing: log or linear");
  sweep->add_option("--phi-min", cfg.phi_min, "Smallest phi");
  sweep->add_option("--phi-max", cfg.phi_max, "Largest phi");
  sweep->add_option("--phi-n", cfg.phi_n, "Number of phi points");
  sweep->add_option("--indicators", cfg.indicators, "Comma-separated subset of F,F_bar,F_tilde,masked");
  sweep->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, err);
    if (code == 0) {
      out << help.str();
      return kExitOk;
    }
    return kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  for (const char* flag : {"--delta", "--phi", "--g1", "--g2", "--omega"}) {
    const bool axis_flag = std::string(flag) == "--delta" || std::string(flag) == "--phi";
    if (active->count(flag) > 0 && !(active == sweep && axis_flag)) {
      cfg.inline_flag_given = true;
    }
  }

  try {
    check_format(cfg);
    if (active == propagate) return cmd_propagate(cfg, out);
    if (active == check) return cmd_lindblad_check(cfg, out, err);
    if (active == perturb) return cmd_perturb(cfg, out);
    if (active == indicators) return cmd_indicators(cfg, out);
    return cmd_sweep(cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace zenodyn::cli
