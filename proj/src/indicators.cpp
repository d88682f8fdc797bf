#include "zenodyn/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace zenodyn {

namespace {

struct KernelResult {
  std::vector<double> f_raw;
  std::vector<double> f_norm;
  std::vector<double> f_zeta;
  double F = std::numeric_limits<double>::infinity();
  double F_bar = std::numeric_limits<double>::infinity();
  double F_zeta = std::numeric_limits<double>::infinity();
};

double b_population(const StateVector& psi, Eigen::Index dim_a) {
  return psi.tail(psi.size() - dim_a).squaredNorm();
}

Complex b_overlap(const StateVector& bra, const StateVector& ket, Eigen::Index dim_a) {
  const Eigen::Index nb = bra.size() - dim_a;
  return bra.tail(nb).dot(ket.tail(nb));
}

void check_generators(const CMatrix& h, const CMatrix& h0, Eigen::Index dim_a, const IndicatorConfig& cfg) {
  cfg.validate(h.rows());
  if (h.rows() != h.cols() || h0.rows() != h.rows() || h0.cols() != h.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "indicators: H and H0 must be square with equal dims");
  }
  if (dim_a < 0 || dim_a >= h.rows()) throw Error(ErrorKind::InvalidInput, "indicators: dim_a out of range");
  const Eigen::Index nb = h.rows() - dim_a;
  const bool blocks_match = h0.topLeftCorner(dim_a, dim_a) == h.topLeftCorner(dim_a, dim_a) &&
                            h0.bottomRightCorner(nb, nb) == h.bottomRightCorner(nb, nb);
  const bool off_zero = dim_a == 0 || (h0.topRightCorner(dim_a, nb).cwiseAbs().maxCoeff() == 0.0 &&
                                       h0.bottomLeftCorner(nb, dim_a).cwiseAbs().maxCoeff() == 0.0);
  if (!blocks_match || !off_zero) {
    throw Error(ErrorKind::InvalidInput, "indicators: H0 must be the block-diagonal part of H");
  }
}

// Propagates psi (under h), psi0 (under h0) and optionally zeta (under h_tilde)
// on the uniform grid and accumulates the running minima.
KernelResult run_kernel(const CMatrix& h, const CMatrix& h0, const CMatrix* h_tilde,
                        Eigen::Index dim_a, const IndicatorConfig& cfg, bool want_bar,
                        bool keep_series) {
  const StateVector& init = cfg.initial;
  const double p_init = b_population(init, dim_a);
  if (!(p_init >= kSupportFloor)) {
    throw Error(ErrorKind::EmptyBSupport, "indicators: initial state has no weight on B");
  }
  const double den0 = std::sqrt(p_init * p_init);
  // With no A-B coupling the B components of psi, psi0 and zeta coincide and
  // keep their norm, so every ratio is identically one.
  const Eigen::Index nb = h.rows() - dim_a;
  const bool uncoupled = dim_a == 0 || (h.topRightCorner(dim_a, nb).cwiseAbs().maxCoeff() == 0.0 &&
                                        h.bottomLeftCorner(nb, dim_a).cwiseAbs().maxCoeff() == 0.0);

  const double dt = cfg.dt();
  const StepPropagator step(h, dt);
  const StepPropagator step0(h0, dt);
  std::optional<StepPropagator> step_zeta;
  if (h_tilde != nullptr) step_zeta.emplace(*h_tilde, dt);

  KernelResult r;
  if (keep_series) {
    r.f_raw.reserve(static_cast<std::size_t>(cfg.n_time));
    r.f_norm.reserve(static_cast<std::size_t>(cfg.n_time));
    if (h_tilde != nullptr) r.f_zeta.reserve(static_cast<std::size_t>(cfg.n_time));
  }

  StateVector psi = init;
  StateVector psi0 = init;
  StateVector zeta = init;
  for (int k = 0; k < cfg.n_time; ++k) {
    if (k > 0) {
      psi = step.step(psi);
      psi0 = step0.step(psi0);
      if (step_zeta) zeta = step_zeta->step(zeta);
    }
    const double num = std::norm(b_overlap(psi0, psi, dim_a));
    const double raw = uncoupled ? 1.0 : num / den0;
    r.F = std::min(r.F, raw);
    if (keep_series) r.f_raw.push_back(raw);

    if (want_bar) {
      const double p = b_population(psi, dim_a);
      const double p0 = b_population(psi0, dim_a);
      if (!(p >= kSupportFloor) || !(p0 >= kSupportFloor)) {
        throw Error(ErrorKind::BSupportVanished,
                    "indicators: B projection fell below floor at t = " + std::to_string(k * dt));
      }
      const double normed = uncoupled ? 1.0 : num / std::sqrt(p0 * p);
      r.F_bar = std::min(r.F_bar, normed);
      if (keep_series) r.f_norm.push_back(normed);
    }
    if (step_zeta) {
      const double z = uncoupled ? 1.0 : std::norm(b_overlap(psi0, zeta, dim_a)) / den0;
      r.F_zeta = std::min(r.F_zeta, z);
      if (keep_series) r.f_zeta.push_back(z);
    }
  }
  return r;
}

}  // namespace

std::string_view to_string(ZenoClass c) {
  switch (c) {
    case ZenoClass::EZD: return "EZD";
    case ZenoClass::AntiZenoLeaning: return "anti-Zeno-leaning";
    case ZenoClass::Neutral: return "neutral";
  }
  return "neutral";
}

void IndicatorConfig::validate(Eigen::Index dim) const {
  if (n_time < 2) throw Error(ErrorKind::InvalidInput, "IndicatorConfig: n_time must be >= 2");
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw Error(ErrorKind::InvalidInput, "IndicatorConfig: horizon must be finite and >= 0");
  }
  if (initial.size() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "IndicatorConfig: initial state has dim " +
                                                  std::to_string(initial.size()) + ", model has " +
                                                  std::to_string(dim));
  }
  if (!all_finite(initial)) throw Error(ErrorKind::InvalidInput, "IndicatorConfig: non-finite initial state");
}

ZenoClass classify(double f, double f_tilde, const ZenoThresholds& thresholds) {
  if (f >= thresholds.ezd) return ZenoClass::EZD;
  if (f_tilde < thresholds.anti_zeno) return ZenoClass::AntiZenoLeaning;
  return ZenoClass::Neutral;
}

double fidelity_F(const CMatrix& h, const CMatrix& h0, Eigen::Index dim_a, const IndicatorConfig& cfg) {
  check_generators(h, h0, dim_a, cfg);
  return run_kernel(h, h0, nullptr, dim_a, cfg, false, false).F;
}

double fidelity_F_bar(const CMatrix& h, const CMatrix& h0, Eigen::Index dim_a,
                      const IndicatorConfig& cfg) {
  check_generators(h, h0, dim_a, cfg);
  return run_kernel(h, h0, nullptr, dim_a, cfg, true, false).F_bar;
}

double fidelity_F_tilde(const CMatrix& h, const NonHermitianHamiltonian& model,
                        const IndicatorConfig& cfg) {
  const CMatrix h0 = unperturbed(model);
  check_generators(h, h0, model.dim_a(), cfg);
  const CMatrix h_tilde = (h + h.adjoint()) / 2.0;
  const KernelResult r = run_kernel(h, h0, &h_tilde, model.dim_a(), cfg, false, false);
  return r.F - r.F_zeta;
}

double masked_confinement(const NonHermitianHamiltonian& model, const IndicatorConfig& cfg) {
  const CMatrix h = assemble(model);
  const CMatrix h0 = unperturbed(model);
  check_generators(h, h0, model.dim_a(), cfg);
  const CMatrix h_tilde = hermitianize(model);
  const KernelResult r = run_kernel(h, h0, &h_tilde, model.dim_a(), cfg, false, false);
  return r.F * heaviside(r.F - r.F_zeta);
}

FidelityTrace compute_trace(const NonHermitianHamiltonian& model, const IndicatorConfig& cfg) {
  const CMatrix h = assemble(model);
  const CMatrix h0 = unperturbed(model);
  check_generators(h, h0, model.dim_a(), cfg);
  const CMatrix h_tilde = hermitianize(model);
  KernelResult r = run_kernel(h, h0, &h_tilde, model.dim_a(), cfg, true, true);

  FidelityTrace out;
  out.times.resize(static_cast<std::size_t>(cfg.n_time));
  for (int k = 0; k < cfg.n_time; ++k) out.times[static_cast<std::size_t>(k)] = k * cfg.dt();
  out.f_raw = std::move(r.f_raw);
  out.f_norm = std::move(r.f_norm);
  out.f_zeta = std::move(r.f_zeta);
  out.F = r.F;
  out.F_bar = r.F_bar;
  out.F_tilde = r.F - r.F_zeta;
  out.masked = out.F * heaviside(out.F_tilde);
  out.zeno_class = classify(out.F, out.F_tilde, cfg.thresholds);
  return out;
}

}  // namespace zenodyn
