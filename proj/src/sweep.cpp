#include "zenodyn/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace zenodyn {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// FNV-1a, 64 bit.
std::string hash_hex(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::json axis_json(const Axis& a) {
  return {{"min", format_double(a.min)},
          {"max", format_double(a.max)},
          {"n", a.n},
          {"scale", a.scale == AxisScale::Log ? "log" : "linear"}};
}

std::string canonical_config(const SweepSpec& spec) {
  nlohmann::json cfg;
  cfg["delta_axis"] = axis_json(spec.delta);
  cfg["phi_axis"] = axis_json(spec.phi);
  cfg["family"] = spec.family.description;
  cfg["horizon"] = format_double(spec.indicator_cfg.horizon);
  cfg["n_time"] = spec.indicator_cfg.n_time;
  nlohmann::json init = nlohmann::json::array();
  for (Eigen::Index k = 0; k < spec.indicator_cfg.initial.size(); ++k) {
    init.push_back({format_double(spec.indicator_cfg.initial(k).real()),
                    format_double(spec.indicator_cfg.initial(k).imag())});
  }
  cfg["initial"] = init;
  cfg["thresholds"] = {format_double(spec.indicator_cfg.thresholds.ezd),
                       format_double(spec.indicator_cfg.thresholds.anti_zeno)};
  nlohmann::json which = nlohmann::json::array();
  for (Indicator w : spec.which) which.push_back(std::string(column_name(w)));
  cfg["which"] = which;
  return cfg.dump();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IOError, "cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void Axis::validate(std::string_view name) const {
  const std::string tag(name);
  if (n < 1) throw Error(ErrorKind::InvalidInput, tag + " axis: n must be >= 1");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw Error(ErrorKind::InvalidInput, tag + " axis: bounds must be finite");
  }
  if (scale == AxisScale::Log && (min <= 0.0 || max <= 0.0)) {
    throw Error(ErrorKind::InvalidInput, tag + " axis: log scale needs a positive range");
  }
}

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<std::size_t>(n));
  if (n == 1) {
    out[0] = min;
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / (n - 1);
    out[static_cast<std::size_t>(i)] =
        scale == AxisScale::Log ? std::exp(std::log(min) + frac * (std::log(max) - std::log(min)))
                                : min + frac * (max - min);
  }
  out.front() = min;
  out.back() = max;
  return out;
}

std::string_view column_name(Indicator which) {
  switch (which) {
    case Indicator::F: return "F";
    case Indicator::FBar: return "F_bar";
    case Indicator::FTilde: return "F_tilde";
    case Indicator::Masked: return "masked";
  }
  return "F";
}

Indicator parse_indicator(std::string_view name) {
  if (name == "F") return Indicator::F;
  if (name == "F_bar") return Indicator::FBar;
  if (name == "F_tilde") return Indicator::FTilde;
  if (name == "masked") return Indicator::Masked;
  throw Error(ErrorKind::InvalidInput, "unknown indicator '" + std::string(name) + "'");
}

Family three_state_family(double g1, double g2, double epsilon, double omega) {
  Family f;
  f.build = [=](double delta, double phi) {
    return three_state(delta * epsilon, phi, g1, g2, epsilon, omega);
  };
  f.description = "three_state(g1=" + format_double(g1) + ",g2=" + format_double(g2) +
                  ",epsilon=" + format_double(epsilon) + ",omega=" + format_double(omega) + ")";
  return f;
}

Family model_family(const NonHermitianHamiltonian& base, std::vector<bool> swept, double epsilon,
                    std::string description) {
  base.validate();
  if (swept.size() != base.diag_a.size()) {
    throw Error(ErrorKind::InvalidInput, "model_family: one sweep flag per A entry required");
  }
  Family f;
  f.build = [base, swept = std::move(swept), epsilon](double delta, double phi) {
    NonHermitianHamiltonian h = base;
    for (std::size_t m = 0; m < h.diag_a.size(); ++m) {
      if (swept[m]) h.diag_a[m] = DiagonalEntry{delta * epsilon, phi};
    }
    h.validate();
    return h;
  };
  f.description = std::move(description);
  return f;
}

void SweepSpec::validate() const {
  delta.validate("delta");
  phi.validate("phi");
  if (!family.build) throw Error(ErrorKind::InvalidInput, "SweepSpec: no Hamiltonian family");
  if (which.empty()) throw Error(ErrorKind::InvalidInput, "SweepSpec: no indicators requested");
  if (indicator_cfg.n_time < 2) throw Error(ErrorKind::InvalidInput, "SweepSpec: n_time must be >= 2");
}

double SweepGrid::at(Indicator w, std::size_t i, std::size_t j) const {
  for (std::size_t k = 0; k < which.size(); ++k) {
    if (which[k] == w) return values[k][cell(i, j)];
  }
  throw Error(ErrorKind::InvalidInput, "SweepGrid: indicator not recorded");
}

std::vector<double> evaluate_cell(const SweepSpec& spec, double delta, double phi) {
  const FidelityTrace trace = compute_trace(spec.family.build(delta, phi), spec.indicator_cfg);
  std::vector<double> out;
  out.reserve(spec.which.size());
  for (Indicator w : spec.which) {
    switch (w) {
      case Indicator::F: out.push_back(trace.F); break;
      case Indicator::FBar: out.push_back(trace.F_bar); break;
      case Indicator::FTilde: out.push_back(trace.F_tilde); break;
      case Indicator::Masked: out.push_back(trace.masked); break;
    }
  }
  return out;
}

SweepGrid run_sweep(const SweepSpec& spec) {
  spec.validate();
  SweepGrid grid;
  grid.delta_values = spec.delta.values();
  grid.phi_values = spec.phi.values();
  grid.which = spec.which;
  const std::size_t n_cells = grid.delta_values.size() * grid.phi_values.size();
  grid.values.assign(spec.which.size(),
                     std::vector<double>(n_cells, std::numeric_limits<double>::quiet_NaN()));
  grid.error_mask.assign(n_cells, 0);
  grid.config = canonical_config(spec);
  grid.config_hash = hash_hex(grid.config);

  std::vector<std::string> cell_errors(n_cells);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n_cells; c = next++) {
      const std::size_t i = c / grid.phi_values.size();
      const std::size_t j = c % grid.phi_values.size();
      try {
        const std::vector<double> v = evaluate_cell(spec, grid.delta_values[i], grid.phi_values[j]);
        for (std::size_t w = 0; w < v.size(); ++w) grid.values[w][c] = v[w];
      } catch (const std::exception& e) {
        grid.error_mask[c] = 1;
        cell_errors[c] = e.what();
      }
    }
  };

  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_cells));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (std::size_t c = 0; c < n_cells; ++c) {
    if (!grid.error_mask[c]) continue;
    ++grid.n_failed;
    grid.errors.push_back("cell(" + std::to_string(c / grid.phi_values.size()) + "," +
                          std::to_string(c % grid.phi_values.size()) + "): " + cell_errors[c]);
  }
  return grid;
}

std::string to_csv(const SweepGrid& grid) {
  std::ostringstream out;
  out << "delta,phi";
  for (Indicator w : grid.which) out << ',' << column_name(w);
  if (grid.n_failed > 0) out << ",error";
  out << '\n';
  for (std::size_t i = 0; i < grid.delta_values.size(); ++i) {
    for (std::size_t j = 0; j < grid.phi_values.size(); ++j) {
      const std::size_t c = grid.cell(i, j);
      out << format_double(grid.delta_values[i]) << ',' << format_double(grid.phi_values[j]);
      for (const auto& column : grid.values) out << ',' << format_double(column[c]);
      if (grid.n_failed > 0) out << ',' << static_cast<int>(grid.error_mask[c]);
      out << '\n';
    }
  }
  return out.str();
}

void export_csv(const SweepGrid& grid, const std::string& path) {
  std::ofstream out = open_output(path);
  out << to_csv(grid);
  if (!out.flush()) throw Error(ErrorKind::IOError, "write to '" + path + "' failed");
}

std::string to_json(const SweepGrid& grid) {
  nlohmann::json j;
  j["delta"] = grid.delta_values;
  j["phi"] = grid.phi_values;
  nlohmann::json values = nlohmann::json::object();
  for (std::size_t w = 0; w < grid.which.size(); ++w) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.delta_values.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t k = 0; k < grid.phi_values.size(); ++k) {
        const double v = grid.values[w][grid.cell(i, k)];
        row.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
      }
      rows.push_back(row);
    }
    values[std::string(column_name(grid.which[w]))] = rows;
  }
  j["values"] = values;
  j["error_mask"] = grid.error_mask;
  j["errors"] = grid.errors;
  j["n_failed"] = grid.n_failed;
  j["config"] = grid.config.empty() ? nlohmann::json(nullptr) : nlohmann::json::parse(grid.config);
  j["config_hash"] = grid.config_hash;
  j["deterministic"] = grid.deterministic;
  return j.dump(2) + "\n";
}

void export_json(const SweepGrid& grid, const std::string& path) {
  std::ofstream out = open_output(path);
  out << to_json(grid);
  if (!out.flush()) throw Error(ErrorKind::IOError, "write to '" + path + "' failed");
}

}  // namespace zenodyn
