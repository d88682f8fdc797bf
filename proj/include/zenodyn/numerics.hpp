#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "zenodyn/error.hpp"

namespace zenodyn {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

namespace tol {
inline constexpr double resid = 1e-10;
inline constexpr double biorth = 1e-8;
inline constexpr double degen = 1e-8;
// Reciprocal condition number below 1/sing is treated as singular.
inline constexpr double sing = 1e12;
}  // namespace tol

/// Paired left/right eigensystem of a general complex matrix.
///
/// Column k of `right` and row k of `left` belong to eigenvalues(k) and are
/// normalized so that left.row(k) * right.col(k) == 1 (no conjugation).
struct SpectralData {
  CVector eigenvalues;
  CMatrix right;
  CMatrix left;
  std::vector<double> right_residuals;
  std::vector<double> left_residuals;

  Eigen::Index dim() const { return eigenvalues.size(); }
};

bool all_finite(const CMatrix& m);

// Frobenius norm; the reference scale for every relative tolerance here.
double norm(const CMatrix& m);

/// Returns exp(-i M t) by Pade-13 scaling and squaring.
CMatrix expm(const CMatrix& m, double t);

/// General eigendecomposition with bi-orthonormal left/right vectors.
/// Eigenvalues are sorted by real part, then imaginary part.
SpectralData eig_general(const CMatrix& m);

CVector solve_linear(const CMatrix& m, const CVector& b);

}  // namespace zenodyn
