#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zenodyn/dynamics.hpp"
#include "zenodyn/lindblad.hpp"
#include "zenodyn/model.hpp"

using namespace zenodyn;
using std::numbers::pi;
using zenodyn::testing::Rng;
using zenodyn::testing::uniform;

namespace {

const Complex I(0.0, 1.0);

CVector basis(Eigen::Index n, Eigen::Index k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("zero time returns the initial state") {
  Rng rng(1);
  const CMatrix h = assemble(zenodyn::testing::random_hamiltonian(rng, 1, 2));
  const CVector psi = zenodyn::testing::random_state(rng, 3);
  CHECK((propagate_state(h, psi, 0.0) - psi).norm() < 1e-15);
}

TEST_CASE("stationary B level picks up a phase") {
  const double eps = 1.7;
  CMatrix h = CMatrix::Zero(2, 2);
  h(1, 1) = eps;
  for (double t : {0.3, 2.0, 9.0}) {
    const CVector psi = propagate_state(h, basis(2, 1), t);
    CHECK(std::abs(psi(1) - std::exp(-I * eps * t)) < 1e-13);
    CHECK(std::abs(psi(0)) < 1e-15);
  }
}

TEST_CASE("state evolution agrees with the master equation") {
  const NonHermitianHamiltonian model = three_state(2.0, pi / 2, 0.2, 0.2, 1.0, 0.1);
  const OpenSystemModel open = open_system_from(model);
  const double t = 2 * pi;
  const CVector psi = propagate_state(assemble(model), basis(3, 1), t);
  CMatrix rho0 = CMatrix::Zero(4, 4);
  rho0(1, 1) = 1.0;
  const CMatrix rho = integrate(open, rho0, t, 2.5e-4);
  const CMatrix block = rho.topLeftCorner(3, 3);
  CHECK((block - psi * psi.adjoint()).norm() <= 1e-8);
}

TEST_CASE("density evolution") {
  Rng rng(2);
  const NonHermitianHamiltonian model = three_state(2.0, 1.1, 0.3, 0.2, 1.0, 0.1);
  const CMatrix h = assemble(model);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector psi0 = zenodyn::testing::random_state(rng, 3);
    const double t = uniform(rng, 0.0, 5.0);
    const CVector psi = propagate_state(h, psi0, t);
    const CMatrix rho = propagate_density(h, psi0 * psi0.adjoint(), t);
    CHECK((rho - psi * psi.adjoint()).norm() <= 10 * tol::resid);
  }

  CMatrix mixed = CMatrix::Zero(3, 3);
  mixed(1, 1) = 0.5;
  mixed(2, 2) = 0.5;
  const OpenSystemModel open = open_system_from(model);
  const CMatrix rho_open = integrate(open, embed_r(open, mixed), 1.0, 2.5e-4);
  CHECK((rho_open.topLeftCorner(3, 3) - propagate_density(h, mixed, 1.0)).norm() <= 1e-8);

  CMatrix bad = CMatrix::Zero(3, 3);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(propagate_density(h, bad, 1.0), Error);
}

TEST_CASE("norm never grows and is conserved in the Hermitian limit") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    NonHermitianHamiltonian model = zenodyn::testing::random_hamiltonian(rng, 2, 2);
    const CMatrix h = assemble(model);
    const CVector psi0 = zenodyn::testing::random_state(rng, 4);
    const double t1 = uniform(rng, 0.0, 5.0);
    const double t2 = t1 + uniform(rng, 0.0, 5.0);
    const double n1 = propagate_state(h, psi0, t1).squaredNorm();
    const double n2 = propagate_state(h, psi0, t2).squaredNorm();
    CHECK(n2 <= n1 + 10 * tol::resid);

    for (auto& e : model.diag_a) e.phi = (trial % 2 == 0) ? 0.0 : pi;
    const double nh = propagate_state(assemble(model), psi0, t2).squaredNorm();
    CHECK(std::abs(nh - 1.0) <= 10 * tol::resid);
  }
}

TEST_CASE("composition") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix h = assemble(zenodyn::testing::random_hamiltonian(rng, 1, 3));
    const CVector psi0 = zenodyn::testing::random_state(rng, 4);
    const double t1 = uniform(rng, 0.0, 3.0);
    const double t2 = uniform(rng, 0.0, 3.0);
    const CVector direct = propagate_state(h, psi0, t1 + t2);
    const CVector split = propagate_state(h, propagate_state(h, psi0, t1), t2);
    CHECK((direct - split).norm() <= 10 * tol::resid);
  }
}

TEST_CASE("unperturbed propagation") {
  const NonHermitianHamiltonian model = three_state(3.0, pi / 2, 0.2, 0.2, 1.0, 0.1);
  const CMatrix h0 = unperturbed(model);
  for (double t : {0.5, 3.0, 2 * pi}) {
    const CVector b = propagate_unperturbed(h0, 1, basis(3, 1), t);
    CHECK(std::abs(b.squaredNorm() - 1.0) < 1e-13);
    CHECK((b - expm(h0, t) * basis(3, 1)).norm() < 1e-12);
    const CVector a = propagate_unperturbed(h0, 1, basis(3, 0), t);
    CHECK(std::abs(a(0) - std::exp(-3.0 * t)) < 1e-13);
  }

  // Without coupling the full and unperturbed evolutions coincide.
  const NonHermitianHamiltonian free = three_state(3.0, 1.0, 0.0, 0.0, 1.0, 0.1);
  Rng rng(5);
  const CVector psi0 = zenodyn::testing::random_state(rng, 3);
  CHECK((propagate_unperturbed(unperturbed(free), 1, psi0, 2.0) - propagate_state(assemble(free), psi0, 2.0))
            .norm() < 1e-12);

  try {
    propagate_unperturbed(assemble(model), 1, basis(3, 1), 1.0);
    FAIL("expected NotBlockDiagonal");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotBlockDiagonal);
  }
}

TEST_CASE("spectral route matches the matrix exponential") {
  CMatrix d = CMatrix::Zero(3, 3);
  d(0, 0) = Complex(2.0, -1.0);
  d(1, 1) = 1.0;
  d(2, 2) = -0.5;
  const SpectralData sd = eig_general(d);
  const CVector psi0 = CVector::Ones(3) / std::sqrt(3.0);
  CHECK((spectral_propagate(sd, psi0, 1.5) - propagate_unperturbed(d, 1, psi0, 1.5)).norm() < 1e-13);

  const CMatrix h = assemble(three_state(2.0, pi / 3, 0.3, 0.2, 1.0, 0.1));
  const SpectralData s = eig_general(h);
  CHECK((spectral_propagate(s, basis(3, 1), 0.0) - basis(3, 1)).norm() <= 10 * tol::resid);
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double t = 2 * pi * k / 200.0;
    worst = std::max(worst, (spectral_propagate(s, basis(3, 1), t) - propagate_state(h, basis(3, 1), t)).norm());
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("step propagator drift stays small") {
  const CMatrix h = assemble(three_state(2.0, pi / 3, 0.2, 0.2, 1.0, 0.1));
  const int steps = 10000;
  const double dt = 2 * pi / steps;
  const StepPropagator prop(h, dt);
  CVector psi = basis(3, 1);
  for (int k = 0; k < steps; ++k) psi = prop.step(psi);
  const CVector direct = propagate_state(h, basis(3, 1), 2 * pi);
  CHECK((psi - direct).norm() <= steps * tol::resid * direct.norm());

  const auto series = prop.series(basis(3, 1), 5);
  REQUIRE(series.size() == 5);
  CHECK(series[0] == basis(3, 1));
  CHECK((series[4] - propagate_state(h, basis(3, 1), 4 * dt)).norm() < 1e-13);
}

TEST_CASE("bad inputs") {
  const CMatrix h = CMatrix::Identity(3, 3);
  CHECK_THROWS_AS(propagate_state(h, CVector::Ones(2), 1.0), Error);
  CHECK_THROWS_AS(propagate_state(h, CVector::Ones(3), -1.0), Error);
  CVector nan = CVector::Ones(3);
  nan(0) = std::nan("");
  CHECK_THROWS_AS(propagate_state(h, nan, 1.0), Error);
}
