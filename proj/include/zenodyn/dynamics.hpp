#pragma once

#include <vector>

#include "zenodyn/numerics.hpp"

namespace zenodyn {

using StateVector = CVector;
using DensityMatrix = CMatrix;

/// exp(-i H t) psi0 for t >= 0.
StateVector propagate_state(const CMatrix& h, const StateVector& psi0, double t);

/// U rho0 U^dagger with U = exp(-i H t).
DensityMatrix propagate_density(const CMatrix& h, const DensityMatrix& rho0, double t);

/// Evolution under a coupling-free H0 whose first dim_a states form block A.
///
/// B-supported states go through the eigenbasis of the Hermitian B block,
/// everything else through the matrix exponential.
StateVector propagate_unperturbed(const CMatrix& h0, Eigen::Index dim_a, const StateVector& psi0,
                                  double t);

/// sum_k <u_k|psi0> exp(-i lambda_k t) |v_k>.
StateVector spectral_propagate(const SpectralData& spec, const StateVector& psi0, double t);

// Fixed-step propagator exp(-i H dt). The norm is never renormalized.
class StepPropagator {
 public:
  StepPropagator(const CMatrix& h, double dt);

  StateVector step(const StateVector& psi) const { return u_ * psi; }
  const CMatrix& matrix() const { return u_; }
  double dt() const { return dt_; }

  // n_points states at t = 0, dt, ..., (n_points - 1) dt.
  std::vector<StateVector> series(const StateVector& psi0, std::size_t n_points) const;

 private:
  CMatrix u_;
  double dt_;
};

}  // namespace zenodyn
