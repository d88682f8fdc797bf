#pragma once

#include <vector>

#include "zenodyn/model.hpp"
#include "zenodyn/numerics.hpp"

namespace zenodyn {

/// Rank-one jump |j><k| from a state k of R to a ground state j of G, rate gamma.
/// Indices are zero-based over the full R + G basis.
struct Jump {
  Eigen::Index k = 0;
  Eigen::Index j = 0;
  double gamma = 0.0;
};

/// Zero-temperature Markovian model on R + G. R occupies the first dim_r
/// basis states. h_s must not couple R to G and every jump must map R -> G.
struct OpenSystemModel {
  Eigen::Index dim_r = 0;
  Eigen::Index dim_g = 0;
  CMatrix h_s;
  std::vector<Jump> jumps;

  Eigen::Index dim() const { return dim_r + dim_g; }
  void validate() const;
};

/// d rho / dt = -i[H_S, rho] + sum gamma (X rho X^dagger - {X^dagger X, rho} / 2).
CMatrix liouvillian_apply(const OpenSystemModel& model, const CMatrix& rho);

struct IntegratorOptions {
  // Upper bound on the projected global error, estimated by Richardson
  // extrapolation on the first step.
  double error_budget = 1e-7;
  bool check_step = true;
};

/// Fixed-step RK4 from 0 to t. The step is shrunk to t / ceil(t / dt) so the
/// final time is hit exactly. rho is re-Hermitized after every step.
CMatrix integrate(const OpenSystemModel& model, const CMatrix& rho0, double t, double dt,
                  const IntegratorOptions& opts = {});

// Local error of one RK4 step of size dt from rho (full step vs two half steps).
double richardson_error(const OpenSystemModel& model, const CMatrix& rho, double dt);

/// H = Pi_R H_S Pi_R - i sum gamma / 2 X^dagger X, restricted to R.
CMatrix reduce_to_R(const OpenSystemModel& model);

struct EquivalenceReport {
  double max_deviation = 0.0;
  double max_trace_error = 0.0;
  double final_r_population = 0.0;
  std::size_t samples = 0;
};

/// Compares the R block of the master-equation solution with
/// exp(-iHt) rho0 exp(iH^dagger t) on n_samples uniform times in [0, t].
EquivalenceReport equivalence_check(const OpenSystemModel& model, const CMatrix& rho0_r, double t,
                                    double dt = 1e-3, std::size_t n_samples = 101);

// Embeds an R density matrix into R + G.
CMatrix embed_r(const OpenSystemModel& model, const CMatrix& rho_r);

/// Open system whose reduction is assemble(h): H_S = blockdiag(hermitianize(h), 0)
/// and one jump of rate 2 Gamma_m from every decaying level m to the first ground state.
OpenSystemModel open_system_from(const NonHermitianHamiltonian& h, Eigen::Index dim_g = 1);

}  // namespace zenodyn
