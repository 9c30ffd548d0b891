#pragma once

// Independent reference computations used by the tests. None of these call
// into the library's numerical kernels.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = 3.14159265358979323846;

// J_n(x) by its power series in long double. Fine for |x| <= 12.
inline double bessel_series(int n, double x) {
  const bool flip = n < 0;
  const int m = flip ? -n : n;
  long double sum = 0.0L;
  long double half = static_cast<long double>(x) / 2.0L;
  long double term = std::pow(half, static_cast<long double>(m)) / std::tgamma(static_cast<long double>(m + 1));
  for (int k = 0; k < 200; ++k) {
    sum += term;
    term *= -half * half / (static_cast<long double>(k + 1) * static_cast<long double>(k + 1 + m));
    if (std::abs(term) < 1e-30L * std::max(1.0L, std::abs(sum))) break;
  }
  const double v = static_cast<double>(sum);
  return (flip && (m % 2 == 1)) ? -v : v;
}

// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Mean of a smooth periodic function by the uniform rectangle rule, which
// converges geometrically for analytic integrands.
inline cplx periodic_mean(const std::function<cplx(double)>& f, double period, int n = 4096) {
  cplx s = 0.0;
  for (int i = 0; i < n; ++i) s += f(period * i / n);
  return s / static_cast<double>(n);
}

// 3x3 Bloch matrix of the static flux lattice with the whole flux on the
// a_n-c_n bond, for amplitudes psi_n = psi e^{iqn}. Ordered (A, B, C).
inline Eigen::Vector3d bloch_eigenvalues(double kappa, double gamma, double q) {
  const cplx back = std::polar(1.0, -q);
  const cplx ab = kappa * (1.0 + back);
  const cplx ac = kappa * (std::polar(1.0, gamma) + back);
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = ab;
  h(0, 2) = ac;
  h(1, 0) = std::conj(ab);
  h(2, 0) = std::conj(ac);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

// E = 0, +-2 kappa sqrt(1 + cos(gamma/2) cos(q - gamma/2)), written out again.
inline Eigen::Vector3d dispersion(double kappa, double gamma, double q) {
  const double r = 2.0 * kappa * std::sqrt(std::max(0.0, 1.0 + std::cos(gamma / 2.0) * std::cos(q - gamma / 2.0)));
  return {-r, 0.0, r};
}

// exp(-i H t) psi by eigendecomposition of a Hermitian H.
inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::VectorXcd phases = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * (eig.eigenvectors().adjoint() * psi);
}

}  // namespace oracle
