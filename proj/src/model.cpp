#include "zenodyn/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace zenodyn {

namespace {

[[noreturn]] void violated(const std::string& clause) {
  throw Error(ErrorKind::InvariantViolation, "NonHermitianHamiltonian: " + clause);
}

}  // namespace

Complex DiagonalEntry::value() const {
  // Quadrantal phases land exactly on the axes so that phi in {0, pi} gives a
  // bitwise real entry.
  if (phi == 0.0) return {delta, 0.0};
  if (phi == std::numbers::pi / 2) return {0.0, -delta};
  if (phi == std::numbers::pi) return {-delta, 0.0};
  return {delta * std::cos(phi), -delta * std::sin(phi)};
}

CMatrix NonHermitianHamiltonian::coupling_block() const {
  if (coupling.size() == 0) return CMatrix::Zero(dim_a(), dim_b());
  return coupling;
}

CMatrix NonHermitianHamiltonian::intra_b_block() const {
  if (intra_b.size() == 0) return CMatrix::Zero(dim_b(), dim_b());
  return intra_b;
}

void NonHermitianHamiltonian::validate() const {
  if (dim_b() < 1) violated("dim_B must be >= 1");
  for (std::size_t k = 0; k < diag_a.size(); ++k) {
    const auto& e = diag_a[k];
    if (!std::isfinite(e.delta) || !std::isfinite(e.phi)) {
      violated("diag_A[" + std::to_string(k) + "] not finite");
    }
    if (e.delta < 0.0) violated("diag_A[" + std::to_string(k) + "].delta must be >= 0");
    if (e.phi < 0.0 || e.phi > std::numbers::pi) {
      violated("diag_A[" + std::to_string(k) + "].phi must lie in [0, pi]");
    }
  }
  for (std::size_t n = 0; n < diag_b.size(); ++n) {
    if (!std::isfinite(diag_b[n])) violated("diag_B[" + std::to_string(n) + "] not finite");
  }
  if (coupling.size() != 0 && (coupling.rows() != dim_a() || coupling.cols() != dim_b())) {
    violated("coupling block must be dim_A x dim_B");
  }
  if (!all_finite(coupling)) violated("coupling block not finite");
  if (intra_b.size() != 0) {
    if (intra_b.rows() != dim_b() || intra_b.cols() != dim_b()) {
      violated("intra_B block must be dim_B x dim_B");
    }
    if (!all_finite(intra_b)) violated("intra_B block not finite");
    if (intra_b.diagonal().cwiseAbs().maxCoeff() != 0.0) {
      violated("intra_B block must have zero diagonal (energies go in diag_B)");
    }
    if ((intra_b - intra_b.adjoint()).cwiseAbs().maxCoeff() > tol::resid * (1.0 + intra_b.norm())) {
      violated("B block must be Hermitian");
    }
  }
}

CMatrix unperturbed(const NonHermitianHamiltonian& h) {
  h.validate();
  const Eigen::Index na = h.dim_a();
  const Eigen::Index nb = h.dim_b();
  CMatrix out = CMatrix::Zero(h.dim(), h.dim());
  for (Eigen::Index m = 0; m < na; ++m) out(m, m) = h.diag_a[static_cast<std::size_t>(m)].value();
  out.bottomRightCorner(nb, nb) = h.intra_b_block();
  for (Eigen::Index n = 0; n < nb; ++n) out(na + n, na + n) = h.diag_b[static_cast<std::size_t>(n)];
  return out;
}

CMatrix assemble(const NonHermitianHamiltonian& h) {
  CMatrix out = unperturbed(h);
  const CMatrix c = h.coupling_block();
  out.topRightCorner(h.dim_a(), h.dim_b()) = c;
  out.bottomLeftCorner(h.dim_b(), h.dim_a()) = c.adjoint();
  return out;
}

CMatrix hermitianize(const NonHermitianHamiltonian& h) {
  const CMatrix m = assemble(h);
  return (m + m.adjoint()) / 2.0;
}

NonHermitianHamiltonian three_state(double delta, double phi, double g1, double g2, double epsilon,
                                    double omega) {
  NonHermitianHamiltonian h;
  h.diag_a = {DiagonalEntry{delta, phi}};
  h.diag_b = {epsilon, 0.0};
  h.coupling = CMatrix(1, 2);
  h.coupling << g1, g2;
  h.intra_b = CMatrix::Zero(2, 2);
  h.intra_b(0, 1) = omega;
  h.intra_b(1, 0) = omega;
  h.validate();
  return h;
}

SeparationReport separation(const NonHermitianHamiltonian& h) {
  h.validate();
  if (h.dim_a() < 1) throw Error(ErrorKind::InvalidInput, "separation: dim_A must be >= 1");
  SeparationReport r;
  r.delta_gap = std::abs(h.diag_a.front().value() - Complex(h.diag_b.front(), 0.0));
  for (const auto& a : h.diag_a) {
    for (double b : h.diag_b) r.delta_gap = std::min(r.delta_gap, std::abs(a.value() - b));
  }
  const CMatrix c = h.coupling_block();
  r.c_max = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  if (r.delta_gap == 0.0) {
    throw Error(ErrorKind::ZeroGap, "separation: a diagonal entry of A coincides with one of B");
  }
  r.ratio = r.c_max / r.delta_gap;
  return r;
}

}  // namespace zenodyn
