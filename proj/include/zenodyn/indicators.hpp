#pragma once

#include <numbers>
#include <string_view>
#include <vector>

#include "zenodyn/dynamics.hpp"
#include "zenodyn/model.hpp"

namespace zenodyn {

enum class ZenoClass { EZD, AntiZenoLeaning, Neutral };

std::string_view to_string(ZenoClass c);

struct ZenoThresholds {
  double ezd = 0.95;         // F at or above this counts as confined
  double anti_zeno = -0.02;  // F_tilde below this leans anti-Zeno
};

// B projections below this count as vanished.
inline constexpr double kSupportFloor = 1e-14;

/// Time window [0, horizon] sampled on n_time uniform points (both ends
/// included); the minimum over the window is the minimum over these samples.
struct IndicatorConfig {
  double horizon = 2 * std::numbers::pi;
  int n_time = 2001;
  StateVector initial;
  ZenoThresholds thresholds;

  void validate(Eigen::Index dim) const;
  double dt() const { return horizon / (n_time - 1); }
};

struct FidelityTrace {
  std::vector<double> times;
  std::vector<double> f_raw;   // overlap ratio with the t = 0 normalization
  std::vector<double> f_norm;  // overlap ratio with the time-t normalization
  std::vector<double> f_zeta;  // f_raw with the decay-free state zeta in place of psi
  double F = 0.0;
  double F_bar = 0.0;
  double F_tilde = 0.0;
  double masked = 0.0;
  ZenoClass zeno_class = ZenoClass::Neutral;
};

// H(x) = 1 for x > 0, else 0.
inline double heaviside(double x) { return x > 0.0 ? 1.0 : 0.0; }

ZenoClass classify(double f, double f_tilde, const ZenoThresholds& thresholds);

/// min_t |<psi0(t)|P_B|psi(t)>|^2 / sqrt(<psi0(0)|P_B|psi0(0)> <psi(0)|P_B|psi(0)>).
/// h0 must be the block-diagonal part of h with the first dim_a states in A.
double fidelity_F(const CMatrix& h, const CMatrix& h0, Eigen::Index dim_a, const IndicatorConfig& cfg);

/// As fidelity_F but normalized by the B projections at time t.
double fidelity_F_bar(const CMatrix& h, const CMatrix& h0, Eigen::Index dim_a,
                      const IndicatorConfig& cfg);

/// F minus the same functional for zeta(t) evolving under (H + H^dagger) / 2.
/// h must be assemble(model).
double fidelity_F_tilde(const CMatrix& h, const NonHermitianHamiltonian& model,
                        const IndicatorConfig& cfg);

// F * heaviside(F_tilde).
double masked_confinement(const NonHermitianHamiltonian& model, const IndicatorConfig& cfg);

/// All indicators with their time series.
FidelityTrace compute_trace(const NonHermitianHamiltonian& model, const IndicatorConfig& cfg);

}  // namespace zenodyn
