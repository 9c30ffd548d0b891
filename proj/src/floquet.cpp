#include "abcage/floquet.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "abcage/lattice.hpp"
#include "abcage/rk4.hpp"

namespace abcage {

BlochHamiltonianSample bloch_hamiltonian(double q, double t, const DriveParams& drive, double kappa,
                                         FaultInjection fault) {
  const auto p = gauge_phases(drive, t);
  const cplx back = std::polar(1.0, -q);
  const cplx ab = kappa * (std::polar(1.0, p[0]) + std::polar(1.0, p[1]) * back);
  const cplx ac = kappa * (std::polar(1.0, p[2]) + std::polar(1.0, p[3]) * back);
  const double lower = fault == FaultInjection::kappa_sign_flip ? -1.0 : 1.0;

  BlochHamiltonianSample s;
  s.q = q;
  s.t = t;
  s.matrix.setZero();
  s.matrix(0, 1) = ab;
  s.matrix(0, 2) = ac;
  s.matrix(1, 0) = lower * std::conj(ab);
  s.matrix(2, 0) = lower * std::conj(ac);
  return s;
}

double unitarity_defect(const Eigen::Matrix3cd& u) {
  return (u.adjoint() * u - Eigen::Matrix3cd::Identity()).norm();
}

Eigen::Matrix3cd monodromy(double q, const DriveParams& drive, double kappa,
                           const MonodromyControl& control) {
  const double rate = drive.sigma() + drive.amplitude() + 2.0 * std::abs(kappa);
  const int resolved = static_cast<int>(std::ceil(drive.period() * rate / 0.015));
  const int steps = std::max({400, control.steps_per_period, resolved});
  const double h = drive.period() / steps;
  Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
  Rk4<Eigen::Matrix3cd> stepper;
  auto rhs = [&](double t, const Eigen::Matrix3cd& y, Eigen::Matrix3cd& dy) {
    dy.noalias() = bloch_hamiltonian(q, t, drive, kappa, control.fault).matrix * y;
    dy *= -I;
  };
  for (int k = 0; k < steps; ++k) stepper.step(u, k * h, h, rhs);

  const double defect = unitarity_defect(u);
  if (!(defect <= 1e-8)) {
    std::ostringstream msg;
    msg << "monodromy unitarity defect " << defect << " at q=" << q << " (increase steps_per_period)";
    throw UnitarityLossError(msg.str());
  }
  return u;
}

double fold_quasienergy(double eps, double omega) {
  double f = eps - omega * std::floor(eps / omega + 0.5);  // [-omega/2, omega/2]
  if (f >= 0.5 * omega) f -= omega;
  if (f < -0.5 * omega) f += omega;
  return f;
}

std::array<double, 3> quasienergies(const Eigen::Matrix3cd& u, double omega) {
  const double defect = unitarity_defect(u);
  if (!(defect <= 1e-8)) {
    std::ostringstream msg;
    msg << "matrix is not unitary (defect " << defect << ")";
    throw UnitarityLossError(msg.str());
  }
  const double period = 2.0 * pi / omega;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> eig(u, false);
  std::array<double, 3> eps{};
  for (int j = 0; j < 3; ++j)
    eps[static_cast<std::size_t>(j)] = fold_quasienergy(-std::arg(eig.eigenvalues()(j)) / period, omega);
  std::sort(eps.begin(), eps.end());
  return eps;
}

QuasiEnergySpectrum floquet_spectrum(const DriveParams& drive, double kappa,
                                     const std::vector<double>& q_grid,
                                     const MonodromyControl& control) {
  QuasiEnergySpectrum s;
  s.q_grid = q_grid;
  s.omega = drive.omega();
  s.epsilon.reserve(q_grid.size());
  for (double q : q_grid) s.epsilon.push_back(quasienergies(monodromy(q, drive, kappa, control), s.omega));
  return s;
}

std::array<double, 3> bandwidth(const QuasiEnergySpectrum& spectrum) {
  std::array<double, 3> lo{}, hi{};
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  for (const auto& e : spectrum.epsilon)
    for (std::size_t j = 0; j < 3; ++j) {
      lo[j] = std::min(lo[j], e[j]);
      hi[j] = std::max(hi[j], e[j]);
    }
  std::array<double, 3> w{};
  for (std::size_t j = 0; j < 3; ++j) w[j] = spectrum.epsilon.empty() ? 0.0 : hi[j] - lo[j];
  return w;
}

std::array<double, 3> effective_dispersion(const EffectiveModel& eff, double q) {
  const double k0 = std::abs(eff.kappa0);
  if (k0 == 0.0) return {0.0, 0.0, 0.0};
  const double mapped = -q - (eff.bond_phases[0] - eff.bond_phases[1]);
  const BandTriple e = static_dispersion(k0, eff.gamma_eff, mapped);
  return {e.minus, e.zero, e.plus};
}

double quasienergy_deviation(const std::array<double, 3>& lhs, const std::array<double, 3>& rhs,
                             double omega) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < 3; ++shift) {
    double worst = 0.0;
    for (std::size_t j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(std::remainder(lhs[j] - rhs[(j + shift) % 3], omega)));
    best = std::min(best, worst);
  }
  return best;
}

QuasiEnergySpectrum SweepTable::spectrum(std::size_t gamma_index) const {
  QuasiEnergySpectrum s;
  s.omega = omega();
  s.q_grid = config.q_grid;
  const std::size_t nq = config.q_grid.size();
  for (std::size_t k = 0; k < nq; ++k) s.epsilon.push_back(rows.at(gamma_index * nq + k).eps);
  return s;
}

double SweepTable::max_effective_deviation() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, quasienergy_deviation(r.eps, r.eps_eff, omega()));
  return worst;
}

double SweepTable::max_unitarity_defect() const {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.unitarity_defect);
  return worst;
}

SweepTable sweep(const SweepConfig& config) {
  if (!(config.kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(config.omega_over_kappa > 0.0)) throw std::invalid_argument("omega/kappa must be positive");
  if (config.gamma_axis.empty() || config.q_grid.empty())
    throw std::invalid_argument("sweep grids must be non-empty");
  for (double g : config.gamma_axis)
    if (!(g >= 0.0)) throw std::invalid_argument("normalized amplitude Gamma must be non-negative");

  SweepTable table;
  table.config = config;
  const double omega = config.omega_over_kappa * config.kappa;
  const std::size_t nq = config.q_grid.size();
  const std::size_t total = config.gamma_axis.size() * nq;
  table.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t i = next++; i < total; i = next++) {
        const double g = config.gamma_axis[i / nq];
        const double q = config.q_grid[i % nq];
        const DriveParams drive = DriveParams::resonant(omega, config.order, g, config.phi);
        const Eigen::Matrix3cd u = monodromy(q, drive, config.kappa, config.control);
        SweepRow& row = table.rows[i];
        row.gamma_norm = g;
        row.q = q;
        row.unitarity_defect = unitarity_defect(u);
        row.eps = quasienergies(u, omega);
        auto eff = effective_dispersion(effective_params(drive, config.kappa), q);
        for (double& e : eff) e = fold_quasienergy(e, omega);
        std::sort(eff.begin(), eff.end());
        row.eps_eff = eff;
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = total;
    }
  };

  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < threads; ++k) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("grid needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  return g;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  const double k = table.config.kappa;
  os << "gamma_norm,q,eps1,eps2,eps3,eps1_eff,eps2_eff,eps3_eff\n";
  os << std::setprecision(17);
  for (const auto& r : table.rows) {
    os << r.gamma_norm << ',' << r.q;
    for (double e : r.eps) os << ',' << e / k + 0.0;  // no "-0"
    for (double e : r.eps_eff) os << ',' << e / k + 0.0;
    os << '\n';
  }
}

}  // namespace abcage
