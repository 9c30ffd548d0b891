#include "abcage/drive.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "abcage/bessel.hpp"

namespace abcage {

DriveParams::DriveParams(double beta0, double sigma, double omega, double amplitude, double phi,
                         int order)
    : beta0_(beta0), sigma_(sigma), omega_(omega), amplitude_(amplitude), phi_(phi), order_(order) {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw std::invalid_argument("omega must be positive");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
    throw std::invalid_argument("modulation amplitude must be non-negative");
  if (order < 1) throw std::invalid_argument("resonance order M must be a positive integer");
  if (!std::isfinite(beta0) || !std::isfinite(phi) || !std::isfinite(sigma))
    throw std::invalid_argument("drive parameters must be finite");
  const double target = order * omega;
  if (std::abs(sigma - target) > 1e-12 * std::max(1.0, std::abs(target)))
    throw std::invalid_argument("resonance condition sigma = M * omega violated");
}

DriveParams DriveParams::resonant(double omega, int order, double gamma_norm, double phi,
                                  double beta0) {
  return DriveParams(beta0, order * omega, omega, gamma_norm * omega, phi, order);
}

OnsiteProfiles onsite_profiles(const DriveParams& d, int n, double t) {
  const double ramp = d.beta0() - (2.0 * n + 1.0) * d.sigma();
  return {d.beta0() - 2.0 * d.sigma() * n,
          ramp + d.amplitude() * std::cos(d.omega() * t + d.phi()),
          ramp - d.amplitude() * std::cos(d.omega() * t - d.phi())};
}

std::array<double, 4> gauge_phases(const DriveParams& d, double t) {
  const double g = d.gamma_norm();
  const double drift = d.sigma() * t;
  const double upper = g * (std::sin(d.omega() * t + d.phi()) - std::sin(d.phi()));
  const double lower = g * (std::sin(d.omega() * t - d.phi()) + std::sin(d.phi()));
  return {drift - upper, -drift - upper, drift + lower, -drift + lower};
}

double gauge_phase(const DriveParams& d, int l, double t) {
  if (l < 1 || l > 4) throw std::invalid_argument("gauge phase index must be in 1..4");
  return gauge_phases(d, t)[static_cast<std::size_t>(l - 1)];
}

EffectiveModel effective_params(const DriveParams& d, double kappa) {
  const int m = d.order();
  const double g_sin = d.gamma_norm() * std::sin(d.phi());
  EffectiveModel eff;
  eff.kappa0 = kappa * bessel_j(m, d.gamma_norm());
  eff.phi1_eff = fold_phase(m * (pi + d.phi()) + g_sin);
  eff.phi2_eff = fold_phase(-m * d.phi() + g_sin);
  eff.gamma_eff = fold_phase(4.0 * m * d.phi());
  // Jacobi-Anger: <e^{i phi_1}> = J_M e^{i(G sin phi - M phi)},
  // <e^{i phi_2}> = J_{-M} e^{i(G sin phi + M phi)}, and mirrored for phi_3, phi_4.
  const double forward = fold_phase(g_sin - m * d.phi());
  const double backward = fold_phase(g_sin + m * (pi + d.phi()));
  eff.bond_phases = {forward, backward, backward, forward};
  return eff;
}

cplx cycle_averaged_coupling(const DriveParams& d, int l) {
  if (l < 1 || l > 4) throw std::invalid_argument("gauge phase index must be in 1..4");
  using boost::math::quadrature::gauss_kronrod;
  constexpr double tol = 1e-12;
  constexpr unsigned max_depth = 30;
  const double period = d.period();

  auto integrate = [&](auto part) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(
        [&](double t) { return part(gauge_phase(d, l, t)); }, 0.0, period, max_depth, tol, &error,
        &l1);
    if (!(error <= tol * std::max(l1, period)))
      throw QuadratureError("cycle average did not converge (error estimate " +
                            std::to_string(error) + ")");
    return value / period;
  };
  const double re = integrate([](double p) { return std::cos(p); });
  const double im = integrate([](double p) { return std::sin(p); });
  return {re, im};
}

double plaquette_flux(const std::array<cplx, 4>& c) {
  return fold_phase(std::arg(c[1]) - std::arg(c[0]) + std::arg(c[2]) - std::arg(c[3]));
}

double plaquette_flux(const std::array<double, 4>& p) {
  return fold_phase(p[1] - p[0] + p[2] - p[3]);
}

}  // namespace abcage
