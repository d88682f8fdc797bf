#include "zenodyn/dynamics.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace zenodyn {

namespace {

void check_time(double t, const char* what) {
  if (!std::isfinite(t) || t < 0.0) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": time must be finite and >= 0");
  }
}

void check_dims(const CMatrix& h, Eigen::Index n, const char* what) {
  if (h.rows() != h.cols() || h.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": generator is " +
                                                  std::to_string(h.rows()) + "x" +
                                                  std::to_string(h.cols()) + ", state has dim " +
                                                  std::to_string(n));
  }
}

}  // namespace

StateVector propagate_state(const CMatrix& h, const StateVector& psi0, double t) {
  check_dims(h, psi0.size(), "propagate_state");
  check_time(t, "propagate_state");
  if (!all_finite(psi0)) throw Error(ErrorKind::InvalidInput, "propagate_state: non-finite state");
  return expm(h, t) * psi0;
}

DensityMatrix propagate_density(const CMatrix& h, const DensityMatrix& rho0, double t) {
  if (rho0.rows() != rho0.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "propagate_density: density matrix not square");
  }
  check_dims(h, rho0.rows(), "propagate_density");
  check_time(t, "propagate_density");
  if (!all_finite(rho0)) throw Error(ErrorKind::InvalidInput, "propagate_density: non-finite entry");
  if ((rho0 - rho0.adjoint()).norm() > tol::resid * (1.0 + rho0.norm())) {
    throw Error(ErrorKind::InvalidInput, "propagate_density: density matrix not Hermitian");
  }
  const CMatrix u = expm(h, t);
  return u * rho0 * u.adjoint();
}

StateVector propagate_unperturbed(const CMatrix& h0, Eigen::Index dim_a, const StateVector& psi0,
                                  double t) {
  check_dims(h0, psi0.size(), "propagate_unperturbed");
  check_time(t, "propagate_unperturbed");
  const Eigen::Index n = h0.rows();
  if (dim_a < 0 || dim_a >= n) {
    throw Error(ErrorKind::InvalidInput, "propagate_unperturbed: dim_a out of range");
  }
  const Eigen::Index nb = n - dim_a;
  if (dim_a > 0) {
    const double off = std::max(h0.topRightCorner(dim_a, nb).cwiseAbs().maxCoeff(),
                                h0.bottomLeftCorner(nb, dim_a).cwiseAbs().maxCoeff());
    if (off > tol::resid) {
      throw Error(ErrorKind::NotBlockDiagonal, "propagate_unperturbed: A-B coupling block is nonzero");
    }
  }

  const bool b_supported = dim_a == 0 || psi0.head(dim_a).cwiseAbs().maxCoeff() == 0.0;
  const CMatrix b = h0.bottomRightCorner(nb, nb);
  if (!b_supported || (b - b.adjoint()).cwiseAbs().maxCoeff() > tol::resid * (1.0 + b.norm())) {
    return expm(h0, t) * psi0;
  }

  // |psi0(t)> = sum_n <n|psi(0)> e^{-i E_n t} |n> over the eigenbasis of B.
  const Eigen::SelfAdjointEigenSolver<CMatrix> solver(b);
  const CMatrix& basis = solver.eigenvectors();
  const CVector amplitudes = basis.adjoint() * psi0.tail(nb);
  CVector phased(nb);
  for (Eigen::Index k = 0; k < nb; ++k) {
    phased(k) = amplitudes(k) * std::exp(Complex(0.0, -solver.eigenvalues()(k) * t));
  }
  StateVector out = StateVector::Zero(n);
  out.tail(nb) = basis * phased;
  return out;
}

StateVector spectral_propagate(const SpectralData& spec, const StateVector& psi0, double t) {
  if (psi0.size() != spec.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "spectral_propagate: state/spectrum dim mismatch");
  }
  check_time(t, "spectral_propagate");
  StateVector out = StateVector::Zero(spec.dim());
  for (Eigen::Index k = 0; k < spec.dim(); ++k) {
    const Complex weight = (spec.left.row(k) * psi0).value();
    out += weight * std::exp(Complex(0.0, -1.0) * spec.eigenvalues(k) * t) * spec.right.col(k);
  }
  return out;
}

StepPropagator::StepPropagator(const CMatrix& h, double dt) : dt_(dt) {
  check_time(dt, "StepPropagator");
  u_ = expm(h, dt);
}

std::vector<StateVector> StepPropagator::series(const StateVector& psi0, std::size_t n_points) const {
  check_dims(u_, psi0.size(), "StepPropagator::series");
  std::vector<StateVector> out;
  out.reserve(n_points);
  StateVector psi = psi0;
  for (std::size_t k = 0; k < n_points; ++k) {
    out.push_back(psi);
    psi = u_ * psi;
  }
  return out;
}

}  // namespace zenodyn
