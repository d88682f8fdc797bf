#include "zenodyn/lindblad.hpp"

#include <cmath>
#include <string>

#include "zenodyn/dynamics.hpp"

namespace zenodyn {

namespace {

[[noreturn]] void violated(const std::string& clause) {
  throw Error(ErrorKind::InvariantViolation, "OpenSystemModel: " + clause);
}

void check_density(const OpenSystemModel& model, const CMatrix& rho, Eigen::Index dim,
                   const char* what) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": density matrix has wrong dim");
  }
  if (!all_finite(rho)) throw Error(ErrorKind::InvalidInput, std::string(what) + ": non-finite rho");
  if ((rho - rho.adjoint()).norm() > tol::resid * (1.0 + rho.norm())) {
    throw Error(ErrorKind::InvalidInput, std::string(what) + ": rho not Hermitian");
  }
  (void)model;
}

CMatrix rk4_step(const OpenSystemModel& model, const CMatrix& rho, double h) {
  const CMatrix k1 = liouvillian_apply(model, rho);
  const CMatrix k2 = liouvillian_apply(model, rho + (h / 2) * k1);
  const CMatrix k3 = liouvillian_apply(model, rho + (h / 2) * k2);
  const CMatrix k4 = liouvillian_apply(model, rho + h * k3);
  return rho + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

void OpenSystemModel::validate() const {
  if (dim_r < 1) violated("dim_R must be >= 1");
  if (dim_g < 0) violated("dim_G must be >= 0");
  if (h_s.rows() != dim() || h_s.cols() != dim()) violated("H_S must be (dim_R + dim_G) square");
  if (!all_finite(h_s)) violated("H_S not finite");
  const double scale = tol::resid * (1.0 + h_s.norm());
  if ((h_s - h_s.adjoint()).cwiseAbs().maxCoeff() > scale) violated("H_S must be Hermitian");
  if (dim_g > 0 && h_s.topRightCorner(dim_r, dim_g).cwiseAbs().maxCoeff() > scale) {
    violated("H_S must not couple R and G");
  }
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    const Jump& x = jumps[i];
    const std::string tag = "jump[" + std::to_string(i) + "]";
    if (x.k < 0 || x.k >= dim_r) violated(tag + " source must lie in R");
    if (x.j < dim_r || x.j >= dim()) violated(tag + " target must lie in G");
    if (!std::isfinite(x.gamma) || x.gamma < 0.0) violated(tag + " rate must be finite and >= 0");
  }
}

CMatrix liouvillian_apply(const OpenSystemModel& model, const CMatrix& rho) {
  const Complex minus_i(0.0, -1.0);
  CMatrix out = minus_i * (model.h_s * rho - rho * model.h_s);
  for (const Jump& x : model.jumps) {
    const double half = x.gamma / 2;
    out(x.j, x.j) += x.gamma * rho(x.k, x.k);
    out.row(x.k) -= half * rho.row(x.k);
    out.col(x.k) -= half * rho.col(x.k);
  }
  return out;
}

double richardson_error(const OpenSystemModel& model, const CMatrix& rho, double dt) {
  const CMatrix full = rk4_step(model, rho, dt);
  const CMatrix half = rk4_step(model, rk4_step(model, rho, dt / 2), dt / 2);
  return (full - half).norm() / 15.0;
}

CMatrix integrate(const OpenSystemModel& model, const CMatrix& rho0, double t, double dt,
                  const IntegratorOptions& opts) {
  model.validate();
  check_density(model, rho0, model.dim(), "integrate");
  if (!std::isfinite(t) || t < 0.0) throw Error(ErrorKind::InvalidInput, "integrate: t must be >= 0");
  if (!std::isfinite(dt) || dt <= 0.0) throw Error(ErrorKind::InvalidInput, "integrate: dt must be > 0");
  if (t == 0.0) return rho0;

  const auto steps = static_cast<long>(std::ceil(t / dt - 1e-9));
  const long n = std::max(1L, steps);
  const double h = t / static_cast<double>(n);

  if (opts.check_step) {
    const double projected = richardson_error(model, rho0, h) * static_cast<double>(n);
    if (projected > opts.error_budget) {
      throw Error(ErrorKind::StepTooLarge, "integrate: projected error " + std::to_string(projected) +
                                               " exceeds budget; reduce dt");
    }
  }

  CMatrix rho = rho0;
  for (long s = 0; s < n; ++s) {
    rho = rk4_step(model, rho, h);
    rho = (rho + rho.adjoint()) / 2.0;
  }
  return rho;
}

CMatrix reduce_to_R(const OpenSystemModel& model) {
  model.validate();
  CMatrix h = model.h_s.topLeftCorner(model.dim_r, model.dim_r);
  for (const Jump& x : model.jumps) h(x.k, x.k) -= Complex(0.0, x.gamma / 2);
  return h;
}

CMatrix embed_r(const OpenSystemModel& model, const CMatrix& rho_r) {
  if (rho_r.rows() != model.dim_r || rho_r.cols() != model.dim_r) {
    throw Error(ErrorKind::DimensionMismatch, "embed_r: R density matrix has wrong dim");
  }
  CMatrix rho = CMatrix::Zero(model.dim(), model.dim());
  rho.topLeftCorner(model.dim_r, model.dim_r) = rho_r;
  return rho;
}

EquivalenceReport equivalence_check(const OpenSystemModel& model, const CMatrix& rho0_r, double t,
                                    double dt, std::size_t n_samples) {
  model.validate();
  if (n_samples < 2) throw Error(ErrorKind::InvalidInput, "equivalence_check: need >= 2 samples");
  const CMatrix h = reduce_to_R(model);
  CMatrix rho = embed_r(model, rho0_r);
  const double trace0 = rho.trace().real();

  EquivalenceReport report;
  report.samples = n_samples;
  double previous = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double ts = t * static_cast<double>(s) / static_cast<double>(n_samples - 1);
    if (s > 0) rho = integrate(model, rho, ts - previous, dt);
    previous = ts;
    const CMatrix reduced = propagate_density(h, rho0_r, ts);
    const double dev = (rho.topLeftCorner(model.dim_r, model.dim_r) - reduced).norm();
    report.max_deviation = std::max(report.max_deviation, dev);
    report.max_trace_error = std::max(report.max_trace_error, std::abs(rho.trace().real() - trace0));
  }
  report.final_r_population = rho.topLeftCorner(model.dim_r, model.dim_r).trace().real();
  return report;
}

OpenSystemModel open_system_from(const NonHermitianHamiltonian& h, Eigen::Index dim_g) {
  if (dim_g < 1) throw Error(ErrorKind::InvalidInput, "open_system_from: need at least one ground state");
  OpenSystemModel model;
  model.dim_r = h.dim();
  model.dim_g = dim_g;
  model.h_s = CMatrix::Zero(model.dim(), model.dim());
  model.h_s.topLeftCorner(model.dim_r, model.dim_r) = hermitianize(h);
  for (Eigen::Index m = 0; m < h.dim_a(); ++m) {
    const double rate = 2.0 * h.diag_a[static_cast<std::size_t>(m)].decay_rate();
    if (rate > 0.0) model.jumps.push_back(Jump{m, model.dim_r, rate});
  }
  model.validate();
  return model;
}

}  // namespace zenodyn
