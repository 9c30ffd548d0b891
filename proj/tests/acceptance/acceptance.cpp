// Acceptance checks 1-11. Usage: abcage_acceptance [criterion ...]
// Prints one line per criterion; exit status is the number of failures (capped).

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "abcage/bessel.hpp"
#include "abcage/design.hpp"
#include "abcage/drive.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/floquet.hpp"
#include "abcage/lattice.hpp"
#include "oracles.hpp"

using namespace abcage;

namespace {

// Tolerances.
constexpr double kFlatTol = 1e-12;
constexpr double kRingTol = 1e-10;
constexpr double kAverageTol = 1e-8;
constexpr double kCollapseTol = 0.1;
constexpr double kZeroModeTol = 1e-3;
constexpr double kHighFreqTol = 0.15;
constexpr double kFreezeFloor = 0.95;
constexpr double kCageLeakMax = 0.05;
constexpr double kCagePrMax = 6.0;
constexpr double kBallisticPrMin = 20.0;
constexpr double kBallisticLeakMin = 0.5;
constexpr double kCosineTol = 0.05;
constexpr double kFrameTol = 1e-6;
constexpr double kUnitarityTol = 1e-10;
constexpr double kDriftTol = 1e-8;
constexpr double kHalvingTol = 1e-8;

constexpr int kGammaPoints = 81;
constexpr int kQPoints = 64;
constexpr int kHalfWindow = 30;

struct Verdict {
  bool passed;
  std::string detail;
};

std::string num(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

int threads() {
  if (const char* env = std::getenv("ABCAGE_THREADS")) return std::max(1, std::atoi(env));
  return 1;
}

const SweepTable& cached_sweep(double phi, double omega_over_kappa) {
  static std::map<std::pair<double, double>, SweepTable> cache;
  const auto key = std::make_pair(phi, omega_over_kappa);
  auto it = cache.find(key);
  if (it == cache.end()) {
    SweepConfig c;
    c.gamma_axis = linear_grid(0.0, 4.0, kGammaPoints);
    c.q_grid = brillouin_grid(kQPoints);
    c.phi = phi;
    c.order = 1;
    c.omega_over_kappa = omega_over_kappa;
    c.threads = threads();
    it = cache.emplace(key, sweep(c)).first;
  }
  return it->second;
}

LatticeField hub_excitation() {
  return single_site_field(-kHalfWindow, kHalfWindow, Boundary::open, {SiteKind::a, 0});
}

const Trajectory& cached_run(Frame frame, double phi, double omega_over_kappa, double gamma) {
  static std::map<std::tuple<int, double, double, double>, Trajectory> cache;
  const auto key = std::make_tuple(static_cast<int>(frame), phi, omega_over_kappa, gamma);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const DriveParams d = DriveParams::resonant(omega_over_kappa, 1, gamma, phi);
    it = cache.emplace(key, integrate(frame, hub_excitation(), 1.0, d, 10.0, d.period() / 8.0)).first;
  }
  return it->second;
}

// ---------------------------------------------------------------------------

Verdict ac1() {
  const BlochBands b = static_bands(1.0, pi, 256);
  double lo[3] = {1e9, 1e9, 1e9}, hi[3] = {-1e9, -1e9, -1e9}, off = 0.0;
  for (const auto& e : b.bands) {
    const double v[3] = {e.minus, e.zero, e.plus};
    const double target[3] = {-2.0, 0.0, 2.0};
    for (int j = 0; j < 3; ++j) {
      lo[j] = std::min(lo[j], v[j]);
      hi[j] = std::max(hi[j], v[j]);
      off = std::max(off, std::abs(v[j] - target[j]));
    }
  }
  const double bw = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  return {bw < kFlatTol && off < kFlatTol, "bandwidth " + num(bw) + ", max |E - {-2,0,2}| " + num(off)};
}

Verdict ac2() {
  constexpr int cells = 24;
  double worst = 0.0;
  for (double gamma : {0.0, pi / 2.0, pi}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        build_static_hamiltonian(FluxedRhombicParams(1.0, gamma, cells, Boundary::periodic)), Eigen::EigenvaluesOnly);
    std::vector<double> ref;
    for (int j = 0; j < cells; ++j) {
      const Eigen::Vector3d e = oracle::dispersion(1.0, gamma, 2.0 * pi * j / cells);
      ref.insert(ref.end(), e.data(), e.data() + 3);
    }
    std::sort(ref.begin(), ref.end());
    for (int i = 0; i < 3 * cells; ++i)
      worst = std::max(worst, std::abs(eig.eigenvalues()(i) - ref[static_cast<std::size_t>(i)]));
  }
  return {worst < kRingTol, "max eigenvalue mismatch " + num(worst)};
}

Verdict ac3() {
  double mag = 0.0, flux = 0.0;
  for (int m = 1; m <= 3; ++m)
    for (double phi : {0.0, pi / 8.0, pi / 4.0})
      for (int k = 0; k <= 12; ++k) {
        const double g = 0.5 * k;
        const DriveParams d = DriveParams::resonant(10.0, m, g, phi);
        const double jm = oracle::bessel_series(m, g);
        std::array<cplx, 4> c{};
        for (int l = 1; l <= 4; ++l) {
          c[static_cast<std::size_t>(l - 1)] = cycle_averaged_coupling(d, l);
          mag = std::max(mag, std::abs(std::abs(c[static_cast<std::size_t>(l - 1)]) - std::abs(jm)));
        }
        if (std::abs(jm) > 1e-6) flux = std::max(flux, std::abs(phase_distance(plaquette_flux(c), 4.0 * m * phi)));
      }
  return {mag < kAverageTol && flux < kAverageTol,
          "max ||<e^{i phi}>| - |J_M|| " + num(mag) + ", max flux error " + num(flux)};
}

Verdict ac4() {
  const SweepTable& t = cached_sweep(pi / 4.0, 15.0);
  double bw = 0.0, centre = 0.0;
  for (std::size_t g = 0; g < t.config.gamma_axis.size(); ++g) {
    const QuasiEnergySpectrum s = t.spectrum(g);
    const double k0 = 2.0 * std::abs(oracle::bessel_series(1, t.config.gamma_axis[g]));
    const double target[3] = {-k0, 0.0, k0};
    for (int j = 0; j < 3; ++j) {
      double lo = 1e9, hi = -1e9;
      for (const auto& e : s.epsilon) {
        lo = std::min(lo, e[static_cast<std::size_t>(j)]);
        hi = std::max(hi, e[static_cast<std::size_t>(j)]);
      }
      bw = std::max(bw, hi - lo);
      centre = std::max(centre, std::abs(0.5 * (hi + lo) - target[j]));
    }
  }
  return {bw < kCollapseTol && centre < kCollapseTol,
          "max bandwidth " + num(bw) + ", max centre offset " + num(centre)};
}

Verdict ac5() {
  double worst = 0.0;
  for (double w : {2.0, 5.0, 15.0})
    for (const SweepRow& r : cached_sweep(0.0, w).rows) {
      double closest = 1e9;
      for (double e : r.eps) closest = std::min(closest, std::abs(e));
      worst = std::max(worst, closest);
    }
  return {worst < kZeroModeTol, "max over (Gamma, q) of min |eps| " + num(worst)};
}

Verdict ac6() {
  bool ok = true;
  std::string detail;
  for (double phi : {0.0, pi / 8.0, pi / 4.0}) {
    double prev = 1e9;
    detail += detail.empty() ? "" : "; ";
    for (double w : {2.0, 5.0, 15.0}) {
      const double dev = cached_sweep(phi, w).max_effective_deviation();
      ok = ok && dev < prev;
      prev = dev;
      detail += num(dev) + (w < 15.0 ? " > " : "");
    }
    ok = ok && prev < kHighFreqTol;
  }
  return {ok, "max |eps - eps_eff| at omega/kappa = 2, 5, 15: " + detail};
}

Verdict ac7() {
  const double g = bessel_j_zero(1, 1);
  double lowest = 1.0;
  for (double phi : {0.0, pi / 8.0, pi / 4.0}) {
    const auto r = return_intensity(cached_run(Frame::gauged, phi, 15.0, g), 0);
    lowest = std::min(lowest, *std::min_element(r.begin(), r.end()));
  }
  return {lowest > kFreezeFloor, "min |a0|^2 up to kappa t = 10: " + num(lowest, 4)};
}

Verdict ac8() {
  const auto cage = default_cage(0);
  const Trajectory& caged = cached_run(Frame::gauged, pi / 4.0, 10.0, 2.0);
  const Trajectory& free = cached_run(Frame::gauged, 0.0, 10.0, 2.0);

  const auto leak_c = cage_leakage(caged, cage);
  const auto leak_f = cage_leakage(free, cage);
  double pr_c = 0.0;
  for (const auto& f : caged.snapshots) pr_c = std::max(pr_c, participation_ratio(f));
  const double leak_c_max = *std::max_element(leak_c.begin(), leak_c.end());
  const double pr_f = participation_ratio(free.snapshots.back());
  const double leak_f_end = leak_f.back();

  const double k0 = oracle::bessel_series(1, 2.0);
  const auto ret = return_intensity(caged, 0);
  double cos_dev = 0.0;
  for (std::size_t i = 0; i < ret.size(); ++i) {
    const double c = std::cos(2.0 * k0 * caged.times[i]);
    cos_dev = std::max(cos_dev, std::abs(ret[i] - c * c));
  }

  const bool caging = leak_c_max < kCageLeakMax && pr_c < kCagePrMax;
  const bool ballistic = pr_f > kBallisticPrMin && leak_f_end > kBallisticLeakMin;
  const bool breathing = cos_dev < kCosineTol;
  return {caging && ballistic && breathing,
          std::string("phi=pi/4 leak ") + num(leak_c_max) + " PR " + num(pr_c) + (caging ? " ok" : " FAIL") +
              "; phi=0 PR " + num(pr_f) + " leak " + num(leak_f_end) + (ballistic ? " ok" : " FAIL") +
              "; |a0|^2 vs cos^2(2 kappa0 t) " + num(cos_dev) + (breathing ? " ok" : " FAIL")};
}

Verdict ac9() {
  double worst = 0.0;
  for (double phi : {pi / 4.0, 0.0})
    worst = std::max(worst, max_intensity_deviation(cached_run(Frame::lab, phi, 10.0, 2.0),
                                                    cached_run(Frame::gauged, phi, 10.0, 2.0)));
  return {worst < kFrameTol, "max lab vs gauged intensity difference " + num(worst)};
}

Verdict ac10() {
  const FabricationParameters f = fabrication_parameters(PhysicalDesign{});
  const double r = std::abs(f.bend_radius / 0.1956 - 1.0);
  const double t = std::abs(f.modulation_period / 6.28e-3 - 1.0);
  const double n = std::abs(f.index_depth / 2e-4 - 1.0);
  return {r < 5e-3 && t < 1e-3 && n < 5e-2,
          "R " + num(f.bend_radius * 100, 5) + " cm, T " + num(f.modulation_period * 1e3, 5) + " mm, dn " +
              num(f.index_depth, 4)};
}

Verdict ac11() {
  double defect = 0.0;
  for (double phi : {0.0, pi / 8.0, pi / 4.0})
    for (double w : {2.0, 5.0, 15.0}) {
      SweepConfig c;
      c.gamma_axis = linear_grid(0.0, 4.0, 9);
      c.q_grid = brillouin_grid(16);
      c.phi = phi;
      c.omega_over_kappa = w;
      c.threads = threads();
      defect = std::max(defect, sweep(c).max_unitarity_defect());
    }

  double drift = 0.0;
  for (Frame fr : {Frame::lab, Frame::gauged, Frame::effective}) {
    const Trajectory& tr = cached_run(fr, pi / 4.0, 10.0, 2.0);
    for (std::size_t i = 1; i < tr.times.size(); ++i)
      drift = std::max(drift, std::abs(tr.norm_history[i] - 1.0) / std::max(tr.times[i], 1.0));
  }

  double halving = 0.0;
  for (double phi : {0.0, pi / 4.0}) {
    const DriveParams d = DriveParams::resonant(10.0, 1, 2.0, phi);
    const Trajectory& a = cached_run(Frame::gauged, phi, 10.0, 2.0);
    StepControl half;
    half.max_step = a.step / 2.0;
    halving = std::max(halving, max_intensity_deviation(
                                    a, integrate(Frame::gauged, hub_excitation(), 1.0, d, 10.0, d.period() / 8.0, half)));
  }
  return {defect < kUnitarityTol && drift < kDriftTol && halving < kHalvingTol,
          "unitarity defect " + num(defect) + ", drift per kappa t " + num(drift) + ", step-halving change " +
              num(halving)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11};
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = criteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("AC%-2d %s  %s  [%.1f s]\n", k, v.passed ? "PASS" : "FAIL", v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.passed) ++failed;
  }
  return std::min(failed, 125);
}
