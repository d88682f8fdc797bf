#pragma once

#include <vector>

#include "zenodyn/numerics.hpp"

namespace zenodyn {

/// Complex diagonal energy Delta * exp(-i phi) of a decaying level.
struct DiagonalEntry {
  double delta = 0.0;
  double phi = 0.0;

  Complex value() const;
  double energy() const { return value().real(); }
  // Gamma = Delta sin(phi) >= 0.
  double decay_rate() const { return -value().imag(); }
};

/// H = H0 + H_I with H0 = blockdiag(A, B) and H_I = offdiag(C, C^dagger).
///
/// Basis order: the dim_a decaying states first, then the dim_b stable ones.
/// `coupling` is the dim_a x dim_b block C. `intra_b` holds the Hermitian
/// off-diagonal part of B; B's diagonal lives in `diag_b`. Empty matrices
/// stand for zero blocks.
struct NonHermitianHamiltonian {
  std::vector<DiagonalEntry> diag_a;
  std::vector<double> diag_b;
  CMatrix coupling;
  CMatrix intra_b;

  Eigen::Index dim_a() const { return static_cast<Eigen::Index>(diag_a.size()); }
  Eigen::Index dim_b() const { return static_cast<Eigen::Index>(diag_b.size()); }
  Eigen::Index dim() const { return dim_a() + dim_b(); }

  // Dense C and intra-B blocks, zero-filled when left empty.
  CMatrix coupling_block() const;
  CMatrix intra_b_block() const;

  /// Throws InvariantViolation naming the first violated clause.
  void validate() const;
};

struct SeparationReport {
  double delta_gap = 0.0;
  double c_max = 0.0;
  double ratio = 0.0;
};

CMatrix assemble(const NonHermitianHamiltonian& h);

// blockdiag(A, B): the coupling-free generator.
CMatrix unperturbed(const NonHermitianHamiltonian& h);

/// (H + H^dagger) / 2, i.e. H with every diagonal entry replaced by its real part.
CMatrix hermitianize(const NonHermitianHamiltonian& h);

/// Three-level system: decaying |1> coupled by g1, g2 to the pair |2>, |3>
/// with energies epsilon and 0 and mutual coupling omega.
NonHermitianHamiltonian three_state(double delta, double phi, double g1, double g2, double epsilon,
                                    double omega);

/// delta_gap = min |a_mm - b_nn| over diagonal entries, c_max = max |c_mn|.
SeparationReport separation(const NonHermitianHamiltonian& h);

}  // namespace zenodyn
