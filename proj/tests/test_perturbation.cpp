#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "zenodyn/model.hpp"
#include "zenodyn/perturbation.hpp"

using namespace zenodyn;
using std::numbers::pi;
using zenodyn::testing::Rng;
using zenodyn::testing::uniform;

namespace {

// Decaying level a = delta e^{-i phi} coupled by c to a single B level at e.
NonHermitianHamiltonian two_level(double delta, double phi, Complex c, double e = 0.0) {
  NonHermitianHamiltonian h;
  h.diag_a = {DiagonalEntry{delta, phi}};
  h.diag_b = {e};
  h.coupling = CMatrix(1, 1);
  h.coupling(0, 0) = c;
  return h;
}

// Exact B-branch eigenvalue of [[a, c], [c*, e]]: the root continuing e.
Complex exact_beta(Complex a, Complex c, double e) {
  const Complex mid = (a + e) / 2.0;
  const Complex root = std::sqrt((a - e) * (a - e) / 4.0 + std::norm(c));
  const Complex r1 = mid + root;
  const Complex r2 = mid - root;
  return std::abs(r1 - e) < std::abs(r2 - e) ? r1 : r2;
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

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

double eig_residual(const CMatrix& h, Complex lambda, const CVector& v) {
  return (h * v - lambda * v).norm() / v.norm();
}

}  // namespace

TEST_CASE("zero coupling leaves the unperturbed system") {
  const NonHermitianHamiltonian h = three_state(3.0, 0.7, 0.0, 0.0, 1.0, 0.0);
  for (const PerturbativeSpectrum& p :
       {correct_first_order(h), correct_second_order_eigenvalues(h), correct_second_order_vectors(h)}) {
    CHECK(p.alpha(0) == std::polar(3.0, -0.7));
    CHECK(p.beta(0) == Complex(1.0));
    CHECK(p.beta(1) == Complex(0.0));
    CHECK(p.right_alpha == CMatrix::Identity(3, 1));
    CHECK(p.right_beta == CMatrix::Identity(3, 3).rightCols(2));
    CHECK(p.left_beta == CMatrix::Identity(3, 3).bottomRows(2));
  }
}

TEST_CASE("first-order vectors of a two-level system") {
  const double delta = 4.0;
  const double phi = 1.0;
  const Complex c(0.3, 0.1);
  const PerturbativeSpectrum p = correct_first_order(two_level(delta, phi, c));
  const Complex a = std::polar(delta, -phi);
  CHECK(p.order == 1);
  CHECK(std::abs(p.right_beta(0, 0) - c / (0.0 - a)) < 1e-15);
  CHECK(p.right_beta(1, 0) == Complex(1.0));
  CHECK(std::abs(p.left_beta(0, 0) - std::conj(c) / (0.0 - a)) < 1e-15);
  CHECK(std::abs(p.right_alpha(1, 0) - std::conj(c) / (a - 0.0)) < 1e-15);
  CHECK(std::abs(p.left_alpha(0, 1) - c / (a - 0.0)) < 1e-15);
}

TEST_CASE("Hermitian limit: left vectors are adjoints of right vectors") {
  for (double phi : {0.0, pi}) {
    const NonHermitianHamiltonian h = three_state(4.0, phi, 0.2, 0.3, 1.0, 0.1);
    for (const PerturbativeSpectrum& p : {correct_first_order(h), correct_second_order_vectors(h)}) {
      CHECK(max_abs(p.left_alpha - p.right_alpha.adjoint()) <= tol::biorth);
      CHECK(max_abs(p.left_beta - p.right_beta.adjoint()) <= tol::biorth);
    }
  }
}

TEST_CASE("second-order eigenvalue of a pure-loss two-level system") {
  const PerturbativeSpectrum p = correct_second_order_eigenvalues(two_level(10.0, pi / 2, 0.5));
  CHECK(p.order == 2);
  CHECK(std::abs(p.beta(0) - Complex(0.0, -0.025)) < 1e-15);
  const Complex exact = exact_beta(Complex(0.0, -10.0), 0.5, 0.0);
  const double ratio = 0.05;
  CHECK(std::abs(p.beta(0) - exact) <= 10.0 * ratio * ratio * ratio);

  const PerturbativeSpectrum herm = correct_second_order_eigenvalues(two_level(10.0, 0.0, 0.5));
  CHECK(std::abs(herm.beta(0) - Complex(-0.025)) < 1e-15);
}

TEST_CASE("effective decay rates") {
  for (double phi : {0.0, pi}) {
    for (double r : effective_decay_rates(three_state(3.0, phi, 0.2, 0.2, 1.0, 0.1))) CHECK(r == 0.0);
  }
  const std::vector<double> single = effective_decay_rates(two_level(10.0, pi / 2, 0.5));
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(-0.025).epsilon(1e-14));
  for (double phi : {0.3, 1.0, 2.5}) {
    const double r = effective_decay_rates(two_level(10.0, phi, 0.5))[0];
    CHECK(r == doctest::Approx(-0.025 * std::sin(phi)).epsilon(1e-13));
    const Complex exact = exact_beta(std::polar(10.0, -phi), 0.5, 0.0);
    CHECK(std::abs(r - exact.imag()) <= 10.0 * 0.05 * 0.05 * 0.05);
  }

  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const NonHermitianHamiltonian h = zenodyn::testing::random_hamiltonian(rng, 2, 3, 10.0, 0.5);
    NonHermitianHamiltonian diag = h;
    diag.intra_b = CMatrix();
    const std::vector<double> rates = effective_decay_rates(diag);
    const PerturbativeSpectrum p = correct_second_order_eigenvalues(diag);
    for (std::size_t n = 0; n < rates.size(); ++n) {
      CHECK(rates[n] <= 0.0);
      CHECK(std::abs(rates[n] - p.beta(static_cast<Eigen::Index>(n)).imag()) <= 1e-12);
    }
  }
}

TEST_CASE("second-order vectors") {
  SUBCASE("residual shrinks as the cube of the coupling") {
    const CMatrix h_strong = assemble(three_state(20.0, pi / 3, 0.1, 0.1, 1.0, 0.1));
    const CMatrix h_weak = assemble(three_state(20.0, pi / 3, 0.01, 0.01, 1.0, 0.1));
    const PerturbativeSpectrum strong = correct_second_order_vectors(three_state(20.0, pi / 3, 0.1, 0.1, 1.0, 0.1));
    const PerturbativeSpectrum weak = correct_second_order_vectors(three_state(20.0, pi / 3, 0.01, 0.01, 1.0, 0.1));
    for (Eigen::Index n = 0; n < 2; ++n) {
      const double rs = eig_residual(h_strong, strong.beta(n), strong.right_beta.col(n));
      const double rw = eig_residual(h_weak, weak.beta(n), weak.right_beta.col(n));
      const double decades = std::log10(rs / rw);
      CHECK(decades >= 2.7);
      CHECK(decades <= 3.3);
    }
  }
  SUBCASE("bi-orthonormality defect is third order in the coupling") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
      NonHermitianHamiltonian h = zenodyn::testing::random_hamiltonian(rng, 1, 2, 10.0, 0.1);
      h.diag_a[0].delta += 5.0;
      auto defect = [](const NonHermitianHamiltonian& model) {
        const PerturbativeSpectrum p = correct_second_order_vectors(model);
        CMatrix right(3, 3);
        right << p.right_alpha, p.right_beta;
        CMatrix left(3, 3);
        left << p.left_alpha, p.left_beta;
        return max_abs(left * right - CMatrix::Identity(3, 3));
      };
      NonHermitianHamiltonian half = h;
      half.coupling *= 0.5;
      CHECK(std::log2(defect(h) / defect(half)) == doctest::Approx(3.0).epsilon(0.05));
    }
  }
  SUBCASE("degenerate B levels are refused") {
    NonHermitianHamiltonian h = three_state(5.0, 1.0, 0.1, 0.1, 0.0, 0.0);
    CHECK_NOTHROW(correct_first_order(h));
    CHECK(kind_of([&] { correct_second_order_vectors(h); }) == ErrorKind::NearDegenerateSpectrum);
  }
}

TEST_CASE("eigenvalue errors follow the expected orders") {
  // Bipartite coupling: the first correction vanishes, so beta^(1) is off by
  // O(c^2) and beta^(2) by O(c^4).
  const NonHermitianHamiltonian base = three_state(20.0, pi / 3, 0.1, 0.1, 1.0, 0.1);
  double prev1 = 0.0;
  double prev2 = 0.0;
  for (double scale : {1.0, 0.5, 0.25}) {
    NonHermitianHamiltonian h = base;
    h.coupling *= scale;
    const SpectralData exact = eig_general(assemble(h));
    const PerturbativeSpectrum p1 = correct_first_order(h);
    const PerturbativeSpectrum p2 = correct_second_order_eigenvalues(h);
    double e1 = 0.0;
    double e2 = 0.0;
    for (Eigen::Index n = 0; n < 2; ++n) {
      double best = INFINITY;
      Complex match;
      for (Eigen::Index k = 0; k < 3; ++k) {
        if (std::abs(exact.eigenvalues(k) - p2.beta(n)) < best) {
          best = std::abs(exact.eigenvalues(k) - p2.beta(n));
          match = exact.eigenvalues(k);
        }
      }
      e1 = std::max(e1, std::abs(p1.beta(n) - match));
      e2 = std::max(e2, std::abs(p2.beta(n) - match));
    }
    if (prev1 > 0.0) {
      CHECK(std::log2(prev1 / e1) == doctest::Approx(2.0).epsilon(0.1));
      CHECK(std::log2(prev2 / e2) == doctest::Approx(4.0).epsilon(0.1));
    }
    prev1 = e1;
    prev2 = e2;
  }
}

TEST_CASE("failure modes") {
  CHECK(kind_of([] { correct_first_order(three_state(1.0, 0.0, 0.1, 0.1, 1.0, 0.0)); }) == ErrorKind::ZeroGap);
  NonHermitianHamiltonian bad = three_state(1.0, 0.5, 0.1, 0.1, 1.0, 0.0);
  bad.diag_a[0].phi = -0.1;
  CHECK(kind_of([&] { correct_first_order(bad); }) == ErrorKind::InvariantViolation);
}
