#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "abcage/bessel.hpp"
#include "abcage/floquet.hpp"
#include "abcage/lattice.hpp"
#include "oracles.hpp"

using namespace abcage;

namespace {

// One-period propagator by the exponential midpoint rule, each 3x3 step
// exponentiated through its eigendecomposition.
Eigen::Matrix3cd midpoint_monodromy(double q, const DriveParams& d, double kappa, int steps) {
  const double h = d.period() / steps;
  Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * h;
    const cplx back = std::polar(1.0, -q);
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(0, 1) = kappa * (std::polar(1.0, gauge_phase(d, 1, t)) + std::polar(1.0, gauge_phase(d, 2, t)) * back);
    m(0, 2) = kappa * (std::polar(1.0, gauge_phase(d, 3, t)) + std::polar(1.0, gauge_phase(d, 4, t)) * back);
    m(1, 0) = std::conj(m(0, 1));
    m(2, 0) = std::conj(m(0, 2));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(m);
    const Eigen::Vector3cd ph = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -h)).array().exp();
    u = eig.eigenvectors() * ph.asDiagonal() * eig.eigenvectors().adjoint() * u;
  }
  return u;
}

std::array<double, 3> averaged_bloch_eigenvalues(const DriveParams& d, double kappa, double q) {
  std::array<cplx, 4> c{};
  for (int l = 1; l <= 4; ++l)
    c[static_cast<std::size_t>(l - 1)] =
        kappa * oracle::periodic_mean([&](double t) { return std::polar(1.0, gauge_phase(d, l, t)); }, d.period());
  const cplx back = std::polar(1.0, -q);
  Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
  m(0, 1) = c[0] + c[1] * back;
  m(0, 2) = c[2] + c[3] * back;
  m(1, 0) = std::conj(m(0, 1));
  m(2, 0) = std::conj(m(0, 2));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(m, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues()(0), eig.eigenvalues()(1), eig.eigenvalues()(2)};
}

}  // namespace

TEST_SUITE("floquet") {

TEST_CASE("monodromy agrees with an exponential midpoint product") {
  for (double phi : {0.0, 0.6}) {
    const DriveParams d = DriveParams::resonant(4.0, 1, 1.7, phi);
    for (double q : {-2.0, 0.0, 1.3}) {
      const Eigen::Matrix3cd u = monodromy(q, d, 1.0);
      CHECK(unitarity_defect(u) < 1e-10);
      CHECK((u - midpoint_monodromy(q, d, 1.0, 40000)).norm() < 1e-6);
    }
  }
}

TEST_CASE("effective dispersion is the spectrum of the averaged Bloch matrix") {
  for (int m : {1, 2})
    for (double phi : {0.0, pi / 8.0, pi / 4.0, 0.9})
      for (double g : {0.4, 2.0, 3.5}) {
        const DriveParams d = DriveParams::resonant(5.0, m, g, phi);
        const EffectiveModel eff = effective_params(d, 1.3);
        for (double q : brillouin_grid(11)) {
          const auto got = effective_dispersion(eff, q);
          const auto ref = averaged_bloch_eigenvalues(d, 1.3, q);
          for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(got[j] - ref[j]) < 1e-9);
        }
      }
}

TEST_CASE("folding") {
  CHECK(fold_quasienergy(0.0, 2.0) == 0.0);
  CHECK(fold_quasienergy(1.0, 2.0) == -1.0);
  CHECK(fold_quasienergy(-1.0, 2.0) == -1.0);
  CHECK(fold_quasienergy(2.5, 2.0) == doctest::Approx(0.5));
  for (double e = -9.0; e < 9.0; e += 0.31) {
    const double f = fold_quasienergy(e, 2.0);
    CHECK(f >= -1.0);
    CHECK(f < 1.0);
  }
}

TEST_CASE("quasienergies of a diagonal unitary") {
  const double omega = 3.0, period = 2.0 * pi / omega;
  Eigen::Matrix3cd u = Eigen::Matrix3cd::Zero();
  u(0, 0) = std::polar(1.0, -0.4 * period);
  u(1, 1) = std::polar(1.0, 1.2 * period);
  u(2, 2) = 1.0;
  const auto e = quasienergies(u, omega);
  CHECK(e[0] == doctest::Approx(-1.2));
  CHECK(std::abs(e[1]) < 1e-14);
  CHECK(e[2] == doctest::Approx(0.4));
  u(2, 2) = 1.1;
  CHECK_THROWS_AS(quasienergies(u, omega), UnitarityLossError);
}

TEST_CASE("fault injection breaks unitarity") {
  MonodromyControl c;
  c.fault = FaultInjection::kappa_sign_flip;
  CHECK_THROWS_AS(monodromy(0.3, DriveParams::resonant(5.0, 1, 2.0, 0.0), 1.0, c), UnitarityLossError);
}

TEST_CASE("property: one quasi-energy sits at zero (chiral symmetry)") {
  for (double w : {2.0, 5.0})
    for (double phi : {0.0, 0.3}) {
      const auto s = floquet_spectrum(DriveParams::resonant(w, 1, 1.4, phi), 1.0, brillouin_grid(9));
      for (const auto& e : s.epsilon) CHECK(std::abs(e[1]) < 1e-9);
    }
}

TEST_CASE("band collapse at the first zero of J_1") {
  const double g = bessel_j_zero(1, 1);
  const auto s = floquet_spectrum(DriveParams::resonant(15.0, 1, g, 0.0), 1.0, brillouin_grid(16));
  const auto bw = bandwidth(s);
  for (double b : bw) CHECK(b < 0.05);
}

TEST_CASE("cyclic band matching across the zone edge") {
  const double omega = 2.0;
  const std::array<double, 3> a{-0.99, 0.0, 0.5};
  const std::array<double, 3> b{-0.2, 0.0, 0.99};
  CHECK(quasienergy_deviation(a, {-0.99, 0.0, 0.5}, omega) == 0.0);
  CHECK(quasienergy_deviation({-0.999, 0.0, 0.5}, {0.0, 0.5, 0.999}, omega) == doctest::Approx(0.002));
  CHECK(quasienergy_deviation(a, b, omega) > 0.0);
}

TEST_CASE("sweep is deterministic across thread counts and writes the documented CSV") {
  SweepConfig c;
  c.gamma_axis = linear_grid(0.0, 2.0, 3);
  c.q_grid = brillouin_grid(5);
  c.phi = pi / 8.0;
  c.omega_over_kappa = 5.0;
  c.threads = 1;
  const SweepTable one = sweep(c);
  c.threads = 3;
  const SweepTable three = sweep(c);
  REQUIRE(one.rows.size() == 15);
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].gamma_norm == three.rows[i].gamma_norm);
    CHECK(one.rows[i].q == three.rows[i].q);
    CHECK(one.rows[i].eps == three.rows[i].eps);
  }
  CHECK(one.max_unitarity_defect() < 1e-10);
  std::ostringstream os;
  write_sweep_csv(os, one);
  CHECK(os.str().rfind("gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff\n", 0) == 0);
  CHECK(linear_grid(1.0, 2.0, 1).size() == 1);
  CHECK(linear_grid(0.0, 4.0, 81)[80] == 4.0);
}

}
