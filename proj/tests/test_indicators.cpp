#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zenodyn/indicators.hpp"
#include "zenodyn/model.hpp"

using namespace zenodyn;
using std::numbers::pi;
using zenodyn::testing::Rng;
using zenodyn::testing::uniform;

namespace {

IndicatorConfig config(Eigen::Index dim, Eigen::Index start = 1, int n_time = 2001) {
  IndicatorConfig cfg;
  cfg.n_time = n_time;
  cfg.initial = CVector::Zero(dim);
  cfg.initial(start) = 1.0;
  return cfg;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no zenodyn::Error thrown");
  return ErrorKind::IOError;
}

}  // namespace

TEST_CASE("uncoupled system is perfectly confined") {
  const NonHermitianHamiltonian h = three_state(2.0, pi / 2, 0.0, 0.0, 1.0, 0.1);
  const FidelityTrace tr = compute_trace(h, config(3));
  CHECK(tr.F == 1.0);
  CHECK(tr.F_bar == 1.0);
  CHECK(tr.F_tilde == 0.0);
  CHECK(tr.masked == 0.0);
  CHECK(tr.zeno_class == ZenoClass::EZD);
  CHECK(tr.times.size() == 2001);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(2 * pi).epsilon(1e-15));
}

TEST_CASE("weak coupling keeps F high almost everywhere") {
  int high = 0;
  int total = 0;
  for (double delta : {5.0, 10.0, 30.0, 100.0}) {
    for (double phi : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi}) {
      ++total;
      if (compute_trace(three_state(delta, phi, 0.1, 0.1, 1.0, 0.1), config(3)).F >= 0.9) ++high;
    }
  }
  CHECK(high == total);
}

TEST_CASE("strong loss far from resonance is classified as confined") {
  const FidelityTrace tr = compute_trace(three_state(15.0, pi / 2, 0.2, 0.2, 1.0, 0.1), config(3));
  CHECK(tr.F >= 0.95);
  CHECK(tr.zeno_class == ZenoClass::EZD);
  CHECK(tr.F_tilde > 0.0);
  CHECK(tr.masked == tr.F);
}

TEST_CASE("time-normalized fidelity exceeds the plain one under loss") {
  for (double delta : {2.0, 3.0, 5.0, 8.0}) {
    const FidelityTrace tr = compute_trace(three_state(delta, pi / 2, 0.2, 0.2, 1.0, 0.1), config(3));
    CHECK(tr.F_bar > tr.F);
  }
}

TEST_CASE("indicator bounds on random draws") {
  Rng rng(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const NonHermitianHamiltonian h = zenodyn::testing::random_hamiltonian(rng, 1, 2);
    IndicatorConfig cfg = config(3, 1, 101);
    cfg.initial = zenodyn::testing::random_state(rng, 3);
    const FidelityTrace tr = compute_trace(h, cfg);
    CHECK(tr.F >= 0.0);
    CHECK(tr.F <= 1.0 + 1e-12);
    CHECK(tr.F_bar >= 0.0);
    CHECK(tr.F_bar <= 1.0 + 1e-12);
    CHECK(tr.F_tilde >= -1.0 - 1e-12);
    CHECK(tr.F_tilde <= 1.0 + 1e-12);
    CHECK((tr.masked == 0.0 || tr.masked == tr.F));
  }
}

TEST_CASE("no loss means no excess confinement") {
  for (double phi : {0.0, pi}) {
    for (double delta : {0.5, 2.0, 20.0}) {
      const NonHermitianHamiltonian h = three_state(delta, phi, 0.3, 0.2, 1.0, 0.1);
      const FidelityTrace tr = compute_trace(h, config(3));
      CHECK(tr.F_tilde == 0.0);
      CHECK(tr.masked == 0.0);
      CHECK(fidelity_F_tilde(assemble(h), h, config(3)) == 0.0);
      CHECK(masked_confinement(h, config(3)) == 0.0);
    }
  }
}

TEST_CASE("standalone functions agree with the combined trace") {
  const NonHermitianHamiltonian h = three_state(3.0, 1.2, 0.2, 0.25, 1.0, 0.1);
  const IndicatorConfig cfg = config(3);
  const FidelityTrace tr = compute_trace(h, cfg);
  CHECK(fidelity_F(assemble(h), unperturbed(h), 1, cfg) == tr.F);
  CHECK(fidelity_F_bar(assemble(h), unperturbed(h), 1, cfg) == tr.F_bar);
  CHECK(fidelity_F_tilde(assemble(h), h, cfg) == tr.F_tilde);
  CHECK(masked_confinement(h, cfg) == tr.masked);
  CHECK(tr.F == *std::min_element(tr.f_raw.begin(), tr.f_raw.end()));
  CHECK(tr.f_raw.front() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("longer horizons can only lower the minimum") {
  const NonHermitianHamiltonian h = three_state(2.0, 1.0, 0.3, 0.3, 1.0, 0.1);
  IndicatorConfig shorter = config(3, 1, 1001);
  shorter.horizon = pi;
  IndicatorConfig longer = config(3, 1, 2001);
  const FidelityTrace a = compute_trace(h, shorter);
  const FidelityTrace b = compute_trace(h, longer);
  CHECK(b.F <= a.F);
  CHECK(b.F_bar <= a.F_bar);
}

TEST_CASE("time grid is converged") {
  const NonHermitianHamiltonian h = three_state(3.0, pi / 2, 0.2, 0.2, 1.0, 0.1);
  const FidelityTrace coarse = compute_trace(h, config(3, 1, 2001));
  const FidelityTrace fine = compute_trace(h, config(3, 1, 4001));
  CHECK(std::abs(coarse.F - fine.F) <= 1e-3);
  CHECK(std::abs(coarse.F_bar - fine.F_bar) <= 1e-3);
  CHECK(std::abs(coarse.F_tilde - fine.F_tilde) <= 1e-3);
}

TEST_CASE("classification") {
  const ZenoThresholds th;
  CHECK(classify(0.95, 0.0, th) == ZenoClass::EZD);
  CHECK(classify(0.96, -0.5, th) == ZenoClass::EZD);
  CHECK(classify(0.5, -0.03, th) == ZenoClass::AntiZenoLeaning);
  CHECK(classify(0.5, -0.02, th) == ZenoClass::Neutral);
  CHECK(classify(0.5, 0.1, th) == ZenoClass::Neutral);
  CHECK(to_string(ZenoClass::EZD) == "EZD");
  CHECK(heaviside(0.0) == 0.0);
  CHECK(heaviside(1e-300) == 1.0);
}

TEST_CASE("failure modes") {
  const NonHermitianHamiltonian h = three_state(3.0, pi / 2, 0.2, 0.2, 1.0, 0.1);
  CHECK(kind_of([&] { compute_trace(h, config(3, 0)); }) == ErrorKind::EmptyBSupport);

  NonHermitianHamiltonian lossy;
  lossy.diag_a = {DiagonalEntry{1.0, pi / 2}};
  lossy.diag_b = {0.0};
  lossy.coupling = CMatrix::Ones(1, 1);
  IndicatorConfig long_run = config(2, 1, 6001);
  long_run.horizon = 60.0;
  CHECK(kind_of([&] { compute_trace(lossy, long_run); }) == ErrorKind::BSupportVanished);

  CHECK(kind_of([&] { compute_trace(h, config(2)); }) == ErrorKind::DimensionMismatch);
  IndicatorConfig bad = config(3);
  bad.n_time = 1;
  CHECK_THROWS_AS(compute_trace(h, bad), Error);
  bad = config(3);
  bad.horizon = -1.0;
  CHECK_THROWS_AS(compute_trace(h, bad), Error);

  CHECK(kind_of([&] { fidelity_F(assemble(h), assemble(h), 1, config(3)); }) == ErrorKind::InvalidInput);
}
