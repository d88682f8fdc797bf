#include "zenodyn/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace zenodyn {

namespace {

void require_square_finite(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": matrix must be square with dim >= 1");
  }
  if (!all_finite(m)) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite matrix entry");
  }
}

double norm1(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Unit 2-norm, largest-magnitude component real and positive.
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const Complex pivot = v(imax);
  v *= std::conj(pivot) / std::abs(pivot);
  v(imax) = Complex(v(imax).real(), 0.0);
  v.normalize();
}

bool ordered(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double norm(const CMatrix& m) { return m.norm(); }

CMatrix expm(const CMatrix& m, double t) {
  require_square_finite(m, "expm");
  if (!std::isfinite(t)) throw Error(ErrorKind::InvalidInput, "expm: non-finite time");

  // Higham (2005) degree-13 diagonal Pade approximant.
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  const Eigen::Index n = m.rows();
  CMatrix a = Complex(0.0, -t) * m;
  const double a_norm = norm1(a);
  if (a_norm == 0.0) return CMatrix::Identity(n, n);
  int s = 0;
  if (a_norm > theta13) {
    s = static_cast<int>(std::ceil(std::log2(a_norm / theta13)));
    a /= std::ldexp(1.0, s);
  }

  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;

  const CMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                          b[3] * a2 + b[1] * ident;
  const CMatrix u = a * u_inner;
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                    b[2] * a2 + b[0] * ident;

  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  return r;
}

SpectralData eig_general(const CMatrix& m) {
  require_square_finite(m, "eig_general");
  const Eigen::Index n = m.rows();
  const double scale = norm(m);

  Eigen::ComplexEigenSolver<CMatrix> right_solver(m, true);
  Eigen::ComplexEigenSolver<CMatrix> left_solver(m.transpose(), true);
  if (right_solver.info() != Eigen::Success || left_solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "eig_general: QR iteration did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const CVector& raw = right_solver.eigenvalues();
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return ordered(raw(i), raw(j)); });

  SpectralData out;
  out.eigenvalues.resize(n);
  out.right.resize(n, n);
  out.left.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = raw(order[static_cast<std::size_t>(k)]);
    out.right.col(k) = right_solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(out.eigenvalues(i) - out.eigenvalues(j)) <= tol::degen * scale) {
        throw Error(ErrorKind::NearDegenerateSpectrum,
                    "eig_general: eigenvalue gap below tolerance; left/right pairing unreliable");
      }
    }
  }

  // Nearest-match pairing of transpose eigenvalues onto the sorted spectrum.
  const CVector& left_raw = left_solver.eigenvalues();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index best = -1;
    double best_dist = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      const double d = std::abs(left_raw(j) - out.eigenvalues(k));
      if (best < 0 || d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    used[static_cast<std::size_t>(best)] = true;
    out.left.row(k) = left_solver.eigenvectors().col(best).transpose();
  }

  out.right_residuals.resize(static_cast<std::size_t>(n));
  out.left_residuals.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    fix_phase(out.right.col(k));
    const Complex overlap = (out.left.row(k) * out.right.col(k)).value();
    if (std::abs(overlap) == 0.0) {
      throw Error(ErrorKind::NearDegenerateSpectrum, "eig_general: left/right eigenvectors orthogonal");
    }
    out.left.row(k) /= overlap;

    const Complex lambda = out.eigenvalues(k);
    const auto v = out.right.col(k);
    const auto u = out.left.row(k);
    out.right_residuals[static_cast<std::size_t>(k)] = (m * v - lambda * v).norm() / v.norm();
    out.left_residuals[static_cast<std::size_t>(k)] = (u * m - lambda * u).norm() / u.norm();
    if (out.right_residuals[static_cast<std::size_t>(k)] > tol::resid * scale ||
        out.left_residuals[static_cast<std::size_t>(k)] > tol::resid * scale) {
      throw Error(ErrorKind::ConvergenceFailure, "eig_general: eigenpair residual above tolerance");
    }
  }

  const double biorth_err =
      (out.left * out.right - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (biorth_err > tol::biorth) {
    throw Error(ErrorKind::NearDegenerateSpectrum,
                "eig_general: bi-orthonormality violated (ill-conditioned eigenbasis)");
  }
  return out;
}

CVector solve_linear(const CMatrix& m, const CVector& b) {
  require_square_finite(m, "solve_linear");
  if (b.size() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve_linear: rhs length differs from matrix dim");
  }
  if (!all_finite(b)) throw Error(ErrorKind::InvalidInput, "solve_linear: non-finite rhs");

  const Eigen::PartialPivLU<CMatrix> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond >= 1.0 / tol::sing)) {
    throw Error(ErrorKind::SingularMatrix, "solve_linear: reciprocal condition number " +
                                               std::to_string(rcond) + " below bound");
  }
  return lu.solve(b);
}

}  // namespace zenodyn
