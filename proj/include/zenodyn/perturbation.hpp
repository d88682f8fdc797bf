#pragma once

#include <vector>

#include "zenodyn/model.hpp"
#include "zenodyn/numerics.hpp"

namespace zenodyn {

/// Perturbative eigensystem of H = H0 + H_I with H_I as the perturbation.
///
/// The B block is first rotated to its eigenbasis (a no-op when intra_B is
/// zero), so beta(n) continues the n-th eigenvalue of B in ascending order,
/// or diag_B[n] when B is already diagonal. Vectors are expressed in the
/// original basis; right vectors are columns, left vectors rows, and
/// left.row(k) * right.col(k) = 1 + O(c^3).
struct PerturbativeSpectrum {
  int order = 1;         // eigenvalue order
  int vector_order = 1;  // eigenvector order
  CVector alpha;
  CVector beta;
  CMatrix right_alpha;
  CMatrix left_alpha;
  CMatrix right_beta;
  CMatrix left_beta;
  // Unperturbed B-branch energies in the order used for beta.
  Eigen::VectorXd b_energies;
  SeparationReport separation;
};

PerturbativeSpectrum correct_first_order(const NonHermitianHamiltonian& h);

// Second-order eigenvalues; vectors stay at first order.
PerturbativeSpectrum correct_second_order_eigenvalues(const NonHermitianHamiltonian& h);

/// Second-order eigenvalues and eigenvectors. Requires a non-degenerate
/// unperturbed spectrum.
PerturbativeSpectrum correct_second_order_vectors(const NonHermitianHamiltonian& h);

/// Im(beta_n) = -sum_m |c_mn|^2 Delta_m sin(phi_m) / |E_n - Delta_m e^{-i phi_m}|^2,
/// one non-positive value per B state, in the beta ordering.
std::vector<double> effective_decay_rates(const NonHermitianHamiltonian& h);

}  // namespace zenodyn
