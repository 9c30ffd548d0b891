#pragma once

// Longitudinal modulation of the propagation constants:
//   V_n = beta0 - 2 sigma n
//   W_n = beta0 - (2n+1) sigma + A cos(omega t + phi)
//   X_n = beta0 - (2n+1) sigma - A cos(omega t - phi)
// with the resonance sigma = M omega that restores photon-assisted tunneling.

#include <array>

#include "abcage/common.hpp"

namespace abcage {

class DriveParams {
 public:
  /// Throws std::invalid_argument if omega <= 0, amplitude < 0, order < 1,
  /// or sigma differs from order * omega (relative tolerance 1e-12).
  DriveParams(double beta0, double sigma, double omega, double amplitude, double phi, int order);

  /// Resonant drive with sigma = order * omega and amplitude = gamma_norm * omega.
  static DriveParams resonant(double omega, int order, double gamma_norm, double phi,
                              double beta0 = 0.0);

  double beta0() const { return beta0_; }
  double sigma() const { return sigma_; }
  double omega() const { return omega_; }
  double amplitude() const { return amplitude_; }
  double phi() const { return phi_; }
  int order() const { return order_; }
  double gamma_norm() const { return amplitude_ / omega_; }
  double period() const { return 2.0 * pi / omega_; }

 private:
  double beta0_;
  double sigma_;
  double omega_;
  double amplitude_;
  double phi_;
  int order_;
};

struct OnsiteProfiles {
  double v = 0.0;  // hub row a_n
  double w = 0.0;  // upper row b_n
  double x = 0.0;  // lower row c_n
};

OnsiteProfiles onsite_profiles(const DriveParams& drive, int n, double t);

/// Closed-form phi_l(t) = int_0^t (V_n - {W_n, W_{n-1}, X_n, X_{n-1}}) dt', l = 1..4.
/// Throws std::invalid_argument for l outside 1..4.
double gauge_phase(const DriveParams& drive, int l, double t);
std::array<double, 4> gauge_phases(const DriveParams& drive, double t);

struct EffectiveModel {
  double kappa0 = 0.0;     // kappa * J_M(Gamma), signed
  double phi1_eff = 0.0;   // M (pi + phi) + Gamma sin(phi), folded
  double phi2_eff = 0.0;   // -M phi + Gamma sin(phi), folded
  double gamma_eff = 0.0;  // 4 M phi folded into (-pi, pi]
  // Phases of <e^{i phi_l}> / J_M(Gamma) for the bonds A_n-B_n, A_n-B_{n-1},
  // A_n-C_n, A_n-C_{n-1}; the effective equations use kappa0 * e^{i bond_phases[l]}.
  std::array<double, 4> bond_phases{};
};

EffectiveModel effective_params(const DriveParams& drive, double kappa);

/// (1/T) int_0^T e^{i phi_l(t)} dt by adaptive Gauss-Kronrod quadrature
/// (absolute tolerance 1e-12). Throws QuadratureError when the error estimate
/// does not meet the tolerance.
cplx cycle_averaged_coupling(const DriveParams& drive, int l);

/// Gauge-invariant plaquette flux (arg c2 - arg c1) + (arg c3 - arg c4), folded.
/// Same orientation as the static lattice's single-bond gauge.
double plaquette_flux(const std::array<cplx, 4>& couplings);
double plaquette_flux(const std::array<double, 4>& bond_phases);

}  // namespace abcage
