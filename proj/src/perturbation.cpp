#include "zenodyn/perturbation.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace zenodyn {

namespace {

// H0 and H_I expressed in the basis A + eigenbasis(B).
struct RotatedProblem {
  Eigen::Index dim_a = 0;
  CVector e0;       // unperturbed eigenvalues
  CMatrix v;        // perturbation matrix elements V_jk
  CMatrix to_orig;  // unitary: columns are the rotated basis vectors
  Eigen::VectorXd b_energies;
  double scale = 0.0;
  SeparationReport separation;
};

RotatedProblem rotate(const NonHermitianHamiltonian& h) {
  RotatedProblem p;
  p.separation = separation(h);
  const Eigen::Index na = h.dim_a();
  const Eigen::Index nb = h.dim_b();
  const Eigen::Index n = h.dim();
  p.dim_a = na;

  CMatrix w = CMatrix::Identity(nb, nb);
  p.b_energies.resize(nb);
  for (Eigen::Index k = 0; k < nb; ++k) p.b_energies(k) = h.diag_b[static_cast<std::size_t>(k)];
  const CMatrix intra = h.intra_b_block();
  if (intra.cwiseAbs().maxCoeff() > 0.0) {
    CMatrix b = intra;
    for (Eigen::Index k = 0; k < nb; ++k) b(k, k) += p.b_energies(k);
    const Eigen::SelfAdjointEigenSolver<CMatrix> solver(b);
    p.b_energies = solver.eigenvalues();
    w = solver.eigenvectors();
    for (Eigen::Index k = 0; k < nb; ++k) {
      Eigen::Index imax = 0;
      w.col(k).cwiseAbs().maxCoeff(&imax);
      w.col(k) *= std::conj(w(imax, k)) / std::abs(w(imax, k));
    }
  }

  p.to_orig = CMatrix::Identity(n, n);
  p.to_orig.bottomRightCorner(nb, nb) = w;

  p.e0.resize(n);
  for (Eigen::Index m = 0; m < na; ++m) p.e0(m) = h.diag_a[static_cast<std::size_t>(m)].value();
  for (Eigen::Index k = 0; k < nb; ++k) p.e0(na + k) = p.b_energies(k);

  const CMatrix c = h.coupling_block() * w;
  p.v = CMatrix::Zero(n, n);
  p.v.topRightCorner(na, nb) = c;
  p.v.bottomLeftCorner(nb, na) = c.adjoint();

  p.scale = assemble(h).norm();
  for (Eigen::Index m = 0; m < na; ++m) {
    for (Eigen::Index k = 0; k < nb; ++k) {
      if (std::abs(p.e0(m) - p.e0(na + k)) <= tol::degen * p.scale) {
        throw Error(ErrorKind::ZeroGap, "perturbation: A level coincides with a B eigenvalue");
      }
    }
  }
  return p;
}

void require_nondegenerate(const RotatedProblem& p) {
  for (Eigen::Index i = 0; i < p.e0.size(); ++i) {
    for (Eigen::Index j = i + 1; j < p.e0.size(); ++j) {
      if (std::abs(p.e0(i) - p.e0(j)) <= tol::degen * p.scale) {
        throw Error(ErrorKind::NearDegenerateSpectrum,
                    "perturbation: unperturbed spectrum is degenerate; vector corrections undefined");
      }
    }
  }
}

// V_ab / (e_k - e_j), zero when the matrix element vanishes (same-block pairs).
Complex ratio(const RotatedProblem& p, Complex numerator, Eigen::Index k, Eigen::Index j) {
  if (numerator == Complex(0.0, 0.0)) return {0.0, 0.0};
  return numerator / (p.e0(k) - p.e0(j));
}

CVector eigenvalues(const RotatedProblem& p, int order) {
  const Eigen::Index n = p.e0.size();
  CVector out = p.e0 + p.v.diagonal();
  if (order < 2) return out;
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != k) out(k) += ratio(p, p.v(k, j) * p.v(j, k), k, j);
    }
  }
  return out;
}

// Columns: right vectors; rows of the second matrix: left vectors (rotated basis).
std::pair<CMatrix, CMatrix> vectors(const RotatedProblem& p, int order) {
  const Eigen::Index n = p.e0.size();
  const CMatrix& v = p.v;
  CMatrix right = CMatrix::Identity(n, n);
  CMatrix left = CMatrix::Identity(n, n);

  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == k) continue;
      right(j, k) += ratio(p, v(j, k), k, j);
      left(k, j) += ratio(p, v(k, j), k, j);
    }
  }
  if (order < 2) return {right, left};

  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index a = 0; a < n; ++a) {
      if (a == k) continue;
      const Complex d_a = p.e0(k) - p.e0(a);
      for (Eigen::Index b = 0; b < n; ++b) {
        if (b == k) continue;
        const Complex d_b = p.e0(k) - p.e0(b);
        // |v_k> gains V_ab V_bk |a>, <u_k| gains V_kb V_ba <a|.
        right(a, k) += v(a, b) * v(b, k) / (d_a * d_b);
        left(k, a) += v(k, b) * v(b, a) / (d_a * d_b);
      }
      right(a, k) -= v(k, k) * v(a, k) / (d_a * d_a);
      left(k, a) -= v(k, k) * v(k, a) / (d_a * d_a);
      const Complex norm_term = 0.5 * v(k, a) * v(a, k) / (d_a * d_a);
      right(k, k) -= norm_term;
      left(k, k) -= norm_term;
    }
  }
  return {right, left};
}

PerturbativeSpectrum assemble_spectrum(const RotatedProblem& p, int order, int vector_order) {
  const Eigen::Index na = p.dim_a;
  const Eigen::Index nb = p.e0.size() - na;
  const CVector values = eigenvalues(p, order);
  auto [right, left] = vectors(p, vector_order);
  right = p.to_orig * right;
  left = left * p.to_orig.adjoint();

  PerturbativeSpectrum s;
  s.order = order;
  s.vector_order = vector_order;
  s.alpha = values.head(na);
  s.beta = values.tail(nb);
  s.right_alpha = right.leftCols(na);
  s.right_beta = right.rightCols(nb);
  s.left_alpha = left.topRows(na);
  s.left_beta = left.bottomRows(nb);
  s.b_energies = p.b_energies;
  s.separation = p.separation;
  return s;
}

}  // namespace

PerturbativeSpectrum correct_first_order(const NonHermitianHamiltonian& h) {
  return assemble_spectrum(rotate(h), 1, 1);
}

PerturbativeSpectrum correct_second_order_eigenvalues(const NonHermitianHamiltonian& h) {
  return assemble_spectrum(rotate(h), 2, 1);
}

PerturbativeSpectrum correct_second_order_vectors(const NonHermitianHamiltonian& h) {
  const RotatedProblem p = rotate(h);
  require_nondegenerate(p);
  return assemble_spectrum(p, 2, 2);
}

std::vector<double> effective_decay_rates(const NonHermitianHamiltonian& h) {
  const RotatedProblem p = rotate(h);
  const Eigen::Index na = p.dim_a;
  const Eigen::Index nb = p.e0.size() - na;
  std::vector<double> out(static_cast<std::size_t>(nb), 0.0);
  for (Eigen::Index n = 0; n < nb; ++n) {
    double sum = 0.0;
    for (Eigen::Index m = 0; m < na; ++m) {
      const DiagonalEntry& a = h.diag_a[static_cast<std::size_t>(m)];
      const double c2 = std::norm(p.v(m, na + n));
      sum += c2 * a.decay_rate() / std::norm(p.b_energies(n) - a.value());
    }
    out[static_cast<std::size_t>(n)] = -sum;
  }
  return out;
}

}  // namespace zenodyn
