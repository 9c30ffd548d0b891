#pragma once

// Floquet quasi-energies of the gauge-frame Bloch Hamiltonian.
//
// With (A_n, B_n, C_n) = (A, B, C)(t) e^{iqn} the gauge-frame equations reduce to
// i d/dt (A, B, C) = H(q, t) (A, B, C), H periodic with T = 2 pi / omega. The
// one-period propagator U(q) has eigenvalues e^{-i eps T}; eps is folded into
// [-omega/2, omega/2).

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "abcage/common.hpp"
#include "abcage/drive.hpp"

namespace abcage {

struct BlochHamiltonianSample {
  double q = 0.0;
  double t = 0.0;
  Eigen::Matrix3cd matrix;  // rows/cols ordered A, B, C
};

enum class FaultInjection {
  none,
  // Flips the sign of kappa in the B/C rows only, breaking Hermiticity.
  // Negative control for the validation battery.
  kappa_sign_flip,
};

struct MonodromyControl {
  // RK4 steps over one period. The step actually used also satisfies
  // h (sigma + A + 2 kappa) <= 0.015 and never falls below T/400.
  int steps_per_period = 400;
  FaultInjection fault = FaultInjection::none;
};

BlochHamiltonianSample bloch_hamiltonian(double q, double t, const DriveParams& drive, double kappa,
                                         FaultInjection fault = FaultInjection::none);

/// ||U^dagger U - I|| (Frobenius).
double unitarity_defect(const Eigen::Matrix3cd& u);

/// Propagator over one period from the identity. Throws UnitarityLossError when
/// the unitarity defect exceeds 1e-8.
Eigen::Matrix3cd monodromy(double q, const DriveParams& drive, double kappa,
                           const MonodromyControl& control = {});

/// Folds into [-omega/2, omega/2).
double fold_quasienergy(double eps, double omega);

/// eps_j = -arg(lambda_j) / T folded and sorted ascending. Throws
/// UnitarityLossError when U is not unitary to 1e-8.
std::array<double, 3> quasienergies(const Eigen::Matrix3cd& u, double omega);

struct QuasiEnergySpectrum {
  std::vector<double> q_grid;
  std::vector<std::array<double, 3>> epsilon;
  double omega = 0.0;
};

QuasiEnergySpectrum floquet_spectrum(const DriveParams& drive, double kappa,
                                     const std::vector<double>& q_grid,
                                     const MonodromyControl& control = {});

/// Per-band max - min over q, bands labeled by sorted order.
std::array<double, 3> bandwidth(const QuasiEnergySpectrum& spectrum);

/// Spectrum of the cycle-averaged gauge-frame Bloch Hamiltonian at momentum q:
/// the static dispersion with kappa -> |kappa0| and gamma -> gamma_eff, read at
/// the momentum -q - (theta_1 - theta_2) that the bond phases map q onto.
/// Unfolded, sorted ascending.
std::array<double, 3> effective_dispersion(const EffectiveModel& eff, double q);

/// Circular distance between two sorted triples of quasi-energies, minimized
/// over cyclic relabelings (the fold can rotate band order).
double quasienergy_deviation(const std::array<double, 3>& lhs, const std::array<double, 3>& rhs,
                             double omega);

struct SweepConfig {
  std::vector<double> gamma_axis;  // normalized amplitudes Gamma = A / omega
  std::vector<double> q_grid;
  double phi = 0.0;
  int order = 1;
  double omega_over_kappa = 15.0;
  double kappa = 1.0;
  MonodromyControl control{};
  int threads = 1;
};

struct SweepRow {
  double gamma_norm = 0.0;
  double q = 0.0;
  std::array<double, 3> eps{};      // full Floquet, folded, sorted
  std::array<double, 3> eps_eff{};  // effective model, folded, sorted
  double unitarity_defect = 0.0;
};

struct SweepTable {
  SweepConfig config;
  std::vector<SweepRow> rows;  // Gamma outer, q inner

  double omega() const { return config.omega_over_kappa * config.kappa; }
  /// Spectrum at one Gamma index.
  QuasiEnergySpectrum spectrum(std::size_t gamma_index) const;
  /// max over rows of quasienergy_deviation(eps, eps_eff).
  double max_effective_deviation() const;
  double max_unitarity_defect() const;
};

/// Deterministic: rows are assembled in grid order whatever the thread count.
SweepTable sweep(const SweepConfig& config);

/// Uniform grid of n points on [lo, hi] inclusive.
std::vector<double> linear_grid(double lo, double hi, int n);

/// Header: gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff, energies in units of kappa.
void write_sweep_csv(std::ostream& os, const SweepTable& table);

}  // namespace abcage
