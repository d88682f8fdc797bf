#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "zenodyn/indicators.hpp"
#include "zenodyn/model.hpp"

namespace zenodyn {

enum class AxisScale { Linear, Log };

struct Axis {
  double min = 0.0;
  double max = 1.0;
  int n = 1;
  AxisScale scale = AxisScale::Linear;

  void validate(std::string_view name) const;
  // Endpoints are reproduced exactly.
  std::vector<double> values() const;
};

enum class Indicator { F, FBar, FTilde, Masked };

std::string_view column_name(Indicator which);
Indicator parse_indicator(std::string_view name);

/// Builds the Hamiltonian for one grid cell from (Delta / epsilon, phi).
using HamiltonianFamily = std::function<NonHermitianHamiltonian(double delta, double phi)>;

struct Family {
  HamiltonianFamily build;
  // Canonical description echoed into the grid provenance hash.
  std::string description;
};

Family three_state_family(double g1, double g2, double epsilon, double omega);

/// Replaces (delta, phi) of the flagged A entries of `base`; delta is scaled by epsilon.
Family model_family(const NonHermitianHamiltonian& base, std::vector<bool> swept, double epsilon,
                    std::string description);

struct SweepSpec {
  Axis delta{0.1, 100.0, 121, AxisScale::Log};
  Axis phi{0.0, std::numbers::pi, 97, AxisScale::Linear};
  Family family;
  IndicatorConfig indicator_cfg;
  std::vector<Indicator> which{Indicator::F, Indicator::FBar, Indicator::FTilde, Indicator::Masked};
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;

  void validate() const;
};

struct SweepGrid {
  std::vector<double> delta_values;
  std::vector<double> phi_values;
  std::vector<Indicator> which;
  // values[w][i * phi_values.size() + j] for indicator which[w].
  std::vector<std::vector<double>> values;
  std::vector<std::uint8_t> error_mask;
  std::vector<std::string> errors;
  std::size_t n_failed = 0;
  // Canonical JSON echo of the spec and its FNV-1a hash.
  std::string config;
  std::string config_hash;
  bool deterministic = true;

  std::size_t cell(std::size_t i, std::size_t j) const { return i * phi_values.size() + j; }
  double at(Indicator which, std::size_t i, std::size_t j) const;
};

/// Indicator values of one cell in the order of `which`; a cell failure
/// propagates as Error.
std::vector<double> evaluate_cell(const SweepSpec& spec, double delta, double phi);

/// Evaluates every cell in parallel. Failed cells hold NaN and are flagged in
/// error_mask; the sweep itself does not abort.
SweepGrid run_sweep(const SweepSpec& spec);

std::string to_csv(const SweepGrid& grid);
void export_csv(const SweepGrid& grid, const std::string& path);
std::string to_json(const SweepGrid& grid);
void export_json(const SweepGrid& grid, const std::string& path);

}  // namespace zenodyn
