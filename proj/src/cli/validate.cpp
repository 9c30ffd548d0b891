#include "cli/validate.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "abcage/bessel.hpp"
#include "abcage/design.hpp"
#include "abcage/drive.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/lattice.hpp"
#include "abcage/units.hpp"

namespace abcage::cli {
namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

Outcome below(double value, double bound, const std::string& what) {
  return {value < bound, what + " = " + num(value) + " < " + num(bound)};
}

Eigen::VectorXd sorted_eigenvalues(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();  // ascending
}

// ---- core model ------------------------------------------------------------

Outcome flat_bands_at_pi() {
  const auto b = static_bands(1.0, pi, 256);
  double worst = 0.0;
  for (const auto& e : b.bands)
    worst = std::max({worst, std::abs(e.minus + 2.0), std::abs(e.zero), std::abs(e.plus - 2.0)});
  return below(worst, 1e-12, "max |E - {-2, 0, 2}|");
}

Outcome band_touching_at_zero_flux() {
  const auto b = static_bands(1.0, 0.0, 256);
  auto it = std::min_element(b.bands.begin(), b.bands.end(),
                             [](const auto& x, const auto& y) { return x.plus < y.plus; });
  const double q = b.q_grid[static_cast<std::size_t>(it - b.bands.begin())];
  const bool at_edge = std::abs(std::abs(q) - pi) < 1e-12;
  return {it->plus < 1e-12 && at_edge, "min E+ = " + num(it->plus) + " at q = " + num(q)};
}

Outcome hamiltonian_matches_dispersion(bool quick) {
  const int cells = quick ? 12 : 24;
  double worst = 0.0;
  for (double gamma : {0.0, pi / 2.0, pi, 1.1}) {
    const Eigen::VectorXd ev =
        sorted_eigenvalues(build_static_hamiltonian(FluxedRhombicParams(1.0, gamma, cells, Boundary::periodic)));
    std::vector<double> expected;
    for (int j = 0; j < cells; ++j) {
      const BandTriple e = static_dispersion(1.0, gamma, 2.0 * pi * j / cells);
      expected.insert(expected.end(), {e.minus, e.zero, e.plus});
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < ev.size(); ++i)
      worst = std::max(worst, std::abs(ev(i) - expected[static_cast<std::size_t>(i)]));
  }
  return below(worst, 1e-10, "max eigenvalue mismatch");
}

Outcome spectral_symmetry() {
  double worst = 0.0;
  for (double gamma : {0.0, 0.4, 1.3, pi / 2.0, 2.9, pi})
    for (Boundary bc : {Boundary::periodic, Boundary::open}) {
      const Eigen::VectorXd ev = sorted_eigenvalues(build_static_hamiltonian(FluxedRhombicParams(1.0, gamma, 9, bc)));
      const Eigen::Index n = ev.size();
      for (Eigen::Index i = 0; i < n; ++i) worst = std::max(worst, std::abs(ev(i) + ev(n - 1 - i)));
    }
  return below(worst, 1e-10, "max |E_i + E_{n-1-i}|");
}

Outcome gauge_invariance_static() {
  double worst = 0.0;
  for (double gamma : {0.3, pi / 2.0, 2.2, pi}) {
    const FluxedRhombicParams p(1.3, gamma, 10, Boundary::open);
    const Eigen::VectorXd x = sorted_eigenvalues(build_static_hamiltonian(p, PeierlsGauge::single_bond));
    const Eigen::VectorXd y = sorted_eigenvalues(build_static_hamiltonian(p, PeierlsGauge::distributed));
    worst = std::max(worst, (x - y).cwiseAbs().maxCoeff());
  }
  return below(worst, 1e-10, "max eigenvalue difference between gauges");
}

Outcome plaquette_flux_check() {
  double worst = 0.0;
  for (double gamma : {-2.5, 0.0, 0.7, pi}) {
    const FluxedRhombicParams p(1.0, gamma, 6, Boundary::periodic);
    for (PeierlsGauge g : {PeierlsGauge::single_bond, PeierlsGauge::distributed}) {
      const Eigen::MatrixXcd h = build_static_hamiltonian(p, g);
      for (int cell = 0; cell < 6; ++cell)
        worst = std::max(worst, std::abs(plaquette_holonomy(h, cell, 6, 1.0) - std::polar(1.0, gamma)));
    }
  }
  return below(worst, 1e-12, "max |holonomy - e^{i gamma}|");
}

Outcome compact_states_exact() {
  const int cells = 8;
  const Eigen::MatrixXcd h = build_static_hamiltonian(FluxedRhombicParams(1.0, pi, cells, Boundary::periodic));
  const auto states = compact_flat_band_states(1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (int shift : {0, 1, 3}) {
      const Eigen::VectorXcd psi = states[i].translated(shift).embed(cells);
      worst = std::max(worst, (h * psi - states[i].energy * psi).norm() / psi.norm());
    }
    for (std::size_t j = i + 1; j < 3; ++j)
      worst = std::max(worst, std::abs(states[i].embed(cells).dot(states[j].embed(cells))));
  }
  return below(worst, 1e-12, "max residual / overlap");
}

// ---- drive -----------------------------------------------------------------

Outcome phase_periodicity() {
  double worst = 0.0;
  for (int m : {1, 2, 3})
    for (double phi : {0.0, 0.4, pi / 4.0}) {
      const DriveParams d = DriveParams::resonant(7.0, m, 2.3, phi);
      for (double t : {0.0, 0.137, 0.52, 1.9})
        for (int l = 1; l <= 4; ++l)
          worst = std::max(worst, std::abs(std::polar(1.0, gauge_phase(d, l, t + d.period())) -
                                           std::polar(1.0, gauge_phase(d, l, t))));
    }
  return below(worst, 1e-12, "max |e^{i phi(t+T)} - e^{i phi(t)}|");
}

Outcome site_independence() {
  const DriveParams d(0.7, 6.0, 3.0, 5.1, 0.3, 2);
  double worst = 0.0;
  for (double t : {0.0, 0.41, 1.7}) {
    const OnsiteProfiles ref = onsite_profiles(d, 0, t);
    const OnsiteProfiles ref_prev = onsite_profiles(d, -1, t);
    const double r1 = ref.v - ref.w, r2 = ref.v - ref_prev.w, r3 = ref.v - ref.x, r4 = ref.v - ref_prev.x;
    for (int n = -50; n <= 50; ++n) {
      const OnsiteProfiles p = onsite_profiles(d, n, t);
      const OnsiteProfiles q = onsite_profiles(d, n - 1, t);
      worst = std::max({worst, std::abs(p.v - p.w - r1), std::abs(p.v - q.w - r2),
                        std::abs(p.v - p.x - r3), std::abs(p.v - q.x - r4)});
    }
  }
  return below(worst, 1e-9, "max variation with n");
}

Outcome averaged_magnitude_and_flux(bool quick) {
  const double step = quick ? 1.5 : 0.5;
  double mag = 0.0, flux = 0.0;
  for (int m : {1, 2, 3})
    for (double phi : {0.0, pi / 8.0, pi / 4.0})
      for (double g = 0.0; g <= 6.0 + 1e-9; g += step) {
        const DriveParams d = DriveParams::resonant(5.0, m, g, phi);
        std::array<cplx, 4> c{};
        for (int l = 1; l <= 4; ++l) {
          c[static_cast<std::size_t>(l - 1)] = cycle_averaged_coupling(d, l);
          mag = std::max(mag, std::abs(std::abs(c[static_cast<std::size_t>(l - 1)]) - std::abs(bessel_j(m, g))));
        }
        if (std::abs(bessel_j(m, g)) > 1e-6)
          flux = std::max(flux, std::abs(phase_distance(plaquette_flux(c), 4.0 * m * phi)));
      }
  return {mag < 1e-8 && flux < 1e-8,
          "magnitude error = " + num(mag) + ", flux error = " + num(flux) + " (bound 1e-8)"};
}

Outcome closed_form_bond_phases() {
  double worst = 0.0;
  for (int m : {1, 2})
    for (double phi : {0.1, pi / 8.0, 0.9})
      for (double g : {0.7, 2.0, 3.1}) {
        const DriveParams d = DriveParams::resonant(4.0, m, g, phi);
        const EffectiveModel eff = effective_params(d, 1.0);
        for (int l = 1; l <= 4; ++l) {
          const cplx predicted = std::polar(eff.kappa0, eff.bond_phases[static_cast<std::size_t>(l - 1)]);
          worst = std::max(worst, std::abs(predicted - cycle_averaged_coupling(d, l)));
        }
      }
  return below(worst, 1e-9, "max |kappa0 e^{i theta_l} - <e^{i phi_l}>|");
}

// ---- floquet ---------------------------------------------------------------

Outcome monodromy_unitarity(const ValidationOptions& o) {
  MonodromyControl ctl;
  ctl.fault = o.fault;
  double worst = 0.0;
  for (double w : {2.0, 5.0, 15.0})
    for (double g : {0.0, 2.0, 4.0})
      for (double q : {-pi, -1.0, 0.0, 2.0}) {
        const DriveParams d = DriveParams::resonant(w, 1, g, pi / 8.0);
        worst = std::max(worst, unitarity_defect(monodromy(q, d, 1.0, ctl)));
      }
  return below(worst, 1e-10, "max ||U^dag U - I||");
}

Outcome folding() {
  const double omega = 3.0;
  bool ok = true;
  for (double e = -20.0; e <= 20.0; e += 0.173) {
    const double f = fold_quasienergy(e, omega);
    ok = ok && f >= -omega / 2.0 && f < omega / 2.0 && fold_quasienergy(f, omega) == f &&
         std::abs(std::remainder(f - e, omega)) < 1e-12;
  }
  ok = ok && fold_quasienergy(omega / 2.0, omega) == -omega / 2.0;
  return {ok, "values in [-omega/2, omega/2), idempotent, omega/2 -> -omega/2"};
}

SweepConfig sweep_config(double w, double phi, int n_gamma, int n_q, int threads) {
  SweepConfig c;
  c.gamma_axis = linear_grid(0.0, 4.0, n_gamma);
  c.q_grid = brillouin_grid(n_q);
  c.phi = phi;
  c.omega_over_kappa = w;
  c.threads = threads;
  return c;
}

Outcome flat_band_law(const ValidationOptions& o) {
  const SweepTable t = sweep(sweep_config(15.0, pi / 4.0, o.quick ? 11 : 41, 16, o.threads));
  double bw = 0.0, centre = 0.0;
  for (std::size_t g = 0; g < t.config.gamma_axis.size(); ++g) {
    const QuasiEnergySpectrum s = t.spectrum(g);
    const auto w = bandwidth(s);
    bw = std::max({bw, w[0], w[1], w[2]});
    const double k0 = 2.0 * std::abs(bessel_j(1, t.config.gamma_axis[g]));
    const std::array<double, 3> target = {-k0, 0.0, k0};
    for (const auto& e : s.epsilon)
      for (std::size_t j = 0; j < 3; ++j) centre = std::max(centre, std::abs(e[j] - target[j]));
  }
  return {bw < 0.1 && centre < 0.1,
          "max bandwidth = " + num(bw) + ", max distance to {0, +-2|J1|} = " + num(centre) + " (bound 0.1)"};
}

Outcome cdt_signature() {
  const double g = bessel_j_zero(1, 1);
  double worst = 0.0;
  for (double phi : {0.0, pi / 8.0, pi / 4.0}) {
    const DriveParams d = DriveParams::resonant(15.0, 1, g, phi);
    for (const auto& e : floquet_spectrum(d, 1.0, brillouin_grid(16)).epsilon)
      for (double x : e) worst = std::max(worst, std::abs(x));
  }
  return below(worst, 0.1, "max |eps| at the first J1 zero");
}

Outcome high_frequency_convergence(const ValidationOptions& o) {
  std::string detail;
  bool ok = true;
  for (double phi : {0.0, pi / 8.0, pi / 4.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double w : {2.0, 5.0, 15.0}) {
      const double dev = sweep(sweep_config(w, phi, o.quick ? 9 : 21, o.quick ? 8 : 16, o.threads))
                             .max_effective_deviation();
      ok = ok && dev < prev;
      prev = dev;
      detail += num(dev) + (w == 15.0 ? "; " : " > ");
    }
    ok = ok && prev < 0.15;
  }
  return {ok, "deviation along omega/kappa = 2, 5, 15: " + detail};
}

// ---- dynamics --------------------------------------------------------------

Outcome propagation_unitarity(const ValidationOptions& o) {
  const int half = o.quick ? 12 : 30;
  const double t_end = o.quick ? 3.0 : 10.0;
  const LatticeField f0 = single_site_field(-half, half, Boundary::open, {SiteKind::a, 0});
  const DriveParams d = DriveParams::resonant(10.0, 1, 2.0, pi / 4.0);
  double worst = 0.0;
  for (Frame fr : {Frame::lab, Frame::gauged, Frame::effective}) {
    const Trajectory tr = integrate(fr, f0, 1.0, d, t_end, d.period() / 8.0);
    for (std::size_t i = 1; i < tr.times.size(); ++i)
      worst = std::max(worst, std::abs(tr.norm_history[i] - 1.0) / std::max(tr.times[i], 1.0));
  }
  return below(worst, 1e-8, "max norm drift per unit kappa t");
}

Outcome lab_gauge_agreement(const ValidationOptions& o) {
  const int half = o.quick ? 12 : 30;
  const double t_end = o.quick ? 3.0 : 10.0;
  const LatticeField f0 = single_site_field(-half, half, Boundary::open, {SiteKind::a, 0});
  double worst = 0.0;
  for (double phi : {0.0, pi / 4.0}) {
    const DriveParams d = DriveParams::resonant(10.0, 1, 2.0, phi);
    worst = std::max(worst, max_intensity_deviation(integrate(Frame::lab, f0, 1.0, d, t_end, d.period() / 8.0),
                                                    integrate(Frame::gauged, f0, 1.0, d, t_end, d.period() / 8.0)));
  }
  return below(worst, 1e-6, "max lab vs gauged intensity difference");
}

Outcome step_halving(const ValidationOptions& o) {
  const LatticeField f0 = single_site_field(-25, 25, Boundary::open, {SiteKind::a, 0});
  const DriveParams d = DriveParams::resonant(10.0, 1, 2.0, pi / 8.0);
  const double t_end = o.quick ? 3.0 : 10.0;
  const Trajectory a = integrate(Frame::gauged, f0, 1.0, d, t_end, d.period());
  StepControl half;
  half.max_step = a.step / 2.0;
  const Trajectory b = integrate(Frame::gauged, f0, 1.0, d, t_end, d.period(), half);
  return below(max_intensity_deviation(a, b), 1e-8, "max intensity change on halving");
}

Outcome cdt_freezing() {
  const double g = bessel_j_zero(1, 1);
  const LatticeField f0 = single_site_field(-20, 20, Boundary::open, {SiteKind::a, 0});
  double lowest = 1.0;
  for (double phi : {0.0, pi / 8.0, pi / 4.0}) {
    const DriveParams d = DriveParams::resonant(15.0, 1, g, phi);
    const auto r = return_intensity(integrate(Frame::gauged, f0, 1.0, d, 10.0, d.period() / 8.0), 0);
    lowest = std::min(lowest, *std::min_element(r.begin(), r.end()));
  }
  return {lowest > 0.95, "min |a0|^2 = " + num(lowest) + " > 0.95"};
}

Outcome effective_convergence(const ValidationOptions& o) {
  const LatticeField f0 = single_site_field(-25, 25, Boundary::open, {SiteKind::a, 0});
  const double t_end = o.quick ? 5.0 : 10.0;
  double prev = std::numeric_limits<double>::infinity();
  bool ok = true;
  std::string detail;
  for (double w : {2.0, 5.0, 15.0}) {
    const DriveParams d = DriveParams::resonant(w, 1, 2.0, pi / 8.0);
    const double sample = 0.25;
    const double dev = max_intensity_deviation(integrate(Frame::gauged, f0, 1.0, d, t_end, sample),
                                               integrate(Frame::effective, f0, 1.0, d, t_end, sample));
    ok = ok && dev < prev;
    prev = dev;
    detail += num(dev) + (w == 15.0 ? "" : " > ");
  }
  return {ok, "gauged vs effective along omega/kappa = 2, 5, 15: " + detail};
}

Outcome caging_vs_ballistic() {
  const LatticeField f0 = single_site_field(-30, 30, Boundary::open, {SiteKind::a, 0});
  const auto cage = default_cage(0);
  double cage_leak = 0.0, ballistic_leak = 0.0;
  for (double phi : {pi / 4.0, 0.0}) {
    const DriveParams d = DriveParams::resonant(10.0, 1, 2.0, phi);
    const auto leak = cage_leakage(integrate(Frame::gauged, f0, 1.0, d, 10.0, d.period() / 8.0), cage);
    (phi == 0.0 ? ballistic_leak : cage_leak) = *std::max_element(leak.begin(), leak.end());
  }
  return {cage_leak < 0.05 && ballistic_leak > 0.5,
          "caging leakage = " + num(cage_leak) + " < 0.05, ballistic leakage = " + num(ballistic_leak) + " > 0.5"};
}

// ---- design ----------------------------------------------------------------

Outcome worked_example() {
  PhysicalDesign d;
  d.wavelength = units::parse_length("633 nm");
  d.half_spacing = units::parse_length("13.5 um");
  d.sigma = units::parse_inverse_length("10 cm^-1");
  d.omega = units::parse_inverse_length("10 cm^-1");
  d.kappa = units::parse_inverse_length("1 cm^-1");
  d.gamma_norm = 2.0;
  const FabricationParameters f = fabrication_parameters(d);
  const double r = std::abs(f.bend_radius / 0.1956 - 1.0);
  const double t = std::abs(f.modulation_period / 6.28e-3 - 1.0);
  const double n = std::abs(f.index_depth / 2e-4 - 1.0);
  return {r < 5e-3 && t < 1e-3 && n < 5e-2,
          "R = " + num(f.bend_radius * 100) + " cm, T = " + num(f.modulation_period * 1e3) +
              " mm, dn = " + num(f.index_depth)};
}

Outcome design_round_trip() {
  PhysicalDesign d;
  d.kappa = 87.0;
  d.sigma = 2345.0;
  d.omega = 781.6666;
  d.gamma_norm = 1.37;
  const PhysicalDesign back = denormalize(normalize(d));
  const double worst = std::max({std::abs(back.kappa / d.kappa - 1), std::abs(back.sigma / d.sigma - 1),
                                 std::abs(back.omega / d.omega - 1), std::abs(back.gamma_norm / d.gamma_norm - 1),
                                 std::abs(back.wavelength / d.wavelength - 1)});
  return below(worst, 1e-12, "max relative round-trip error");
}

Outcome unit_handling() {
  const bool ok = units::parse_inverse_length("10 cm^-1") == units::parse_inverse_length("1000 m^-1") &&
                  units::parse_length("13.5 um") == units::parse_length("0.0135 mm") &&
                  std::abs(units::parse_length("633 nm") - 633e-9) < 1e-20;
  return {ok, "cm^-1 / m^-1 and um / mm / nm agree"};
}

}  // namespace

std::vector<PropertyResult> run_validation(const ValidationOptions& o) {
  std::vector<PropertyResult> out;
  auto run = [&out](const std::string& module, const std::string& name, const std::function<Outcome()>& fn) {
    PropertyResult r;
    r.module = module;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome res = fn();
      r.passed = res.passed;
      r.detail = res.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("threw: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  };

  run("core-model", "flat bands at gamma = pi", flat_bands_at_pi);
  run("core-model", "band touching at gamma = 0", band_touching_at_zero_flux);
  run("core-model", "Hamiltonian spectrum matches dispersion", [&] { return hamiltonian_matches_dispersion(o.quick); });
  run("core-model", "spectral symmetry E -> -E", spectral_symmetry);
  run("core-model", "flux gauge invariance (open chain)", gauge_invariance_static);
  run("core-model", "plaquette holonomy e^{i gamma}", plaquette_flux_check);
  run("core-model", "compact states are exact eigenstates", compact_states_exact);

  run("drive", "gauge phase periodicity", phase_periodicity);
  run("drive", "site independence of phase rates", site_independence);
  run("drive", "cycle average magnitude |J_M| and flux 4 M phi", [&] { return averaged_magnitude_and_flux(o.quick); });
  run("drive", "closed-form averaged bond phases", closed_form_bond_phases);

  run("floquet", "monodromy unitarity", [&] { return monodromy_unitarity(o); });
  run("floquet", "quasi-energy folding", folding);
  run("floquet", "flat-band law at phi = pi/4", [&] { return flat_band_law(o); });
  run("floquet", "CDT band collapse", cdt_signature);
  run("floquet", "high-frequency convergence", [&] { return high_frequency_convergence(o); });

  run("dynamics", "norm conservation in all frames", [&] { return propagation_unitarity(o); });
  run("dynamics", "lab vs gauged frame intensities", [&] { return lab_gauge_agreement(o); });
  run("dynamics", "step-halving convergence", [&] { return step_halving(o); });
  run("dynamics", "CDT freezing", cdt_freezing);
  run("dynamics", "gauged vs effective convergence", [&] { return effective_convergence(o); });
  run("dynamics", "caging vs ballistic leakage", caging_vs_ballistic);

  run("design-calc", "worked example", worked_example);
  run("design-calc", "normalized round trip", design_round_trip);
  run("design-calc", "unit handling", unit_handling);
  return out;
}

}  // namespace abcage::cli
