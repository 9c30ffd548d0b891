#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "abcage/design.hpp"
#include "abcage/drive.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/lattice.hpp"
#include "cli/config.hpp"
#include "cli/validate.hpp"

namespace abcage::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json read_config(const CommandOptions& opts) {
  if (!opts.config_path) return json::object();
  return load_json(*opts.config_path);
}

std::string header_line(const std::string& command, const json& config) {
  return "# abcage " ABCAGE_VERSION " " + command + " config=" + config.dump() + "\n";
}

// Each file is assembled in memory and written in one go.
void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
  os << content;
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

fs::path out_dir(const CommandOptions& opts) { return opts.out_dir.value_or("."); }

std::string fmt(double v, int precision = 17) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

int resolve_threads(std::optional<int> flag) {
  if (flag && *flag >= 1) return *flag;
  if (const char* env = std::getenv("ABCAGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

int cmd_bands(const CommandOptions& opts, std::ostream& out, std::ostream&) {
  const BandsConfig cfg = parse_bands(read_config(opts));
  const json echo = to_json(cfg);

  const BlochBands bands = static_bands(cfg.kappa, cfg.gamma, cfg.q_points);
  std::ostringstream csv;
  csv << header_line("bands", echo) << "q,E_minus,E_zero,E_plus\n" << std::setprecision(17);
  double lo = bands.bands.front().plus, hi = lo;
  for (std::size_t i = 0; i < bands.q_grid.size(); ++i) {
    const BandTriple& e = bands.bands[i];
    csv << bands.q_grid[i] << ',' << e.minus << ',' << e.zero << ',' << e.plus << '\n';
    lo = std::min(lo, e.plus);
    hi = std::max(hi, e.plus);
  }

  // Compact states are defined for the gamma = pi lattice; residuals are
  // reported against an 8-cell ring.
  const auto states = compact_flat_band_states(cfg.kappa);
  const Eigen::MatrixXcd h =
      build_static_hamiltonian(FluxedRhombicParams(cfg.kappa, pi, 8, Boundary::periodic));
  json listing = json::array();
  for (const auto& st : states) {
    const Eigen::VectorXcd psi = st.embed(8);
    const double residual = (h * psi - st.energy * psi).norm() / psi.norm();
    json support = json::array();
    for (std::size_t i = 0; i < st.support.size(); ++i)
      support.push_back({{"site", std::string(1, to_char(st.support[i].kind))},
                         {"cell", st.support[i].cell},
                         {"re", st.amplitudes[i].real()},
                         {"im", st.amplitudes[i].imag()}});
    listing.push_back({{"energy", st.energy}, {"residual", residual}, {"support", support}});
  }
  const json doc = {{"version", ABCAGE_VERSION},
                    {"command", "bands"},
                    {"config", echo},
                    {"gamma_of_states", pi},
                    {"states", listing}};

  const fs::path dir = out_dir(opts);
  write_file(dir / "bands.csv", csv.str());
  write_file(dir / "compact_states.json", doc.dump(2) + "\n");
  out << "bands: " << bands.q_grid.size() << " momenta written to " << (dir / "bands.csv").string()
      << "\n  bandwidth of E+ and E-: " << fmt(hi - lo, 6)
      << "\ncompact states (gamma = pi): " << (dir / "compact_states.json").string() << "\n";
  return kExitOk;
}

int cmd_quasienergy(const CommandOptions& opts, std::ostream& out, std::ostream&) {
  QuasienergyConfig cfg = parse_quasienergy(read_config(opts));
  if (opts.quick) {
    cfg.gamma_points = std::min(cfg.gamma_points, 21);
    cfg.q_points = std::min(cfg.q_points, 16);
  }
  const json echo = to_json(cfg);

  SweepConfig sc;
  sc.gamma_axis = linear_grid(cfg.gamma_min, cfg.gamma_max, cfg.gamma_points);
  sc.q_grid = brillouin_grid(cfg.q_points);
  sc.phi = cfg.phi;
  sc.order = cfg.order;
  sc.omega_over_kappa = cfg.omega_over_kappa;
  sc.kappa = cfg.kappa;
  sc.control.steps_per_period = cfg.steps_per_period;
  sc.control.fault = opts.fault;
  sc.threads = opts.threads;
  const SweepTable table = sweep(sc);

  std::ostringstream csv;
  csv << header_line("quasienergy", echo);
  write_sweep_csv(csv, table);

  std::ostringstream bw;
  bw << header_line("quasienergy", echo)
     << "# collapse: bandwidth below collapse_threshold = " << cfg.collapse_threshold
     << " kappa; bands labeled by ascending order at each q\n"
     << "gamma_norm,bw1,bw2,bw3,center1,center2,center3,collapsed\n"
     << std::setprecision(17);
  double worst_bw = 0.0;
  for (std::size_t g = 0; g < sc.gamma_axis.size(); ++g) {
    const QuasiEnergySpectrum s = table.spectrum(g);
    const auto w = bandwidth(s);
    std::array<double, 3> center{};
    for (const auto& e : s.epsilon)
      for (std::size_t j = 0; j < 3; ++j) center[j] += e[j] / static_cast<double>(s.epsilon.size());
    bool collapsed = true;
    bw << sc.gamma_axis[g];
    for (double x : w) {
      bw << ',' << x / cfg.kappa;
      worst_bw = std::max(worst_bw, x / cfg.kappa);
      collapsed = collapsed && x / cfg.kappa < cfg.collapse_threshold;
    }
    for (double x : center) bw << ',' << x / cfg.kappa;
    bw << ',' << (collapsed ? 1 : 0) << '\n';
  }

  const fs::path dir = out_dir(opts);
  write_file(dir / "quasienergy.csv", csv.str());
  write_file(dir / "quasienergy_bandwidths.csv", bw.str());
  out << "quasienergy: " << table.rows.size() << " rows written to "
      << (dir / "quasienergy.csv").string() << "\n  max bandwidth: " << fmt(worst_bw, 6)
      << " kappa\n  max |eps_full - eps_eff|: " << fmt(table.max_effective_deviation() / cfg.kappa, 6)
      << " kappa\n  max unitarity defect: " << fmt(table.max_unitarity_defect(), 3) << "\n";
  return kExitOk;
}

namespace {

LatticeField build_initial(const PropagateConfig& c) {
  const InitialCondition& ic = c.initial;
  if (ic.type == "site") return single_site_field(c.n_min, c.n_max, c.boundary, {ic.kind, ic.cell});
  if (ic.type == "compact") {
    const double kappa = c.kappa > 0.0 ? c.kappa : 1.0;
    const auto states = compact_flat_band_states(kappa);
    const std::size_t which = ic.energy == 0.0 ? 0 : (ic.energy > 0.0 ? 1 : 2);
    return compact_state_field(c.n_min, c.n_max, c.boundary, states[which], ic.cell);
  }
  return gaussian_packet_field(c.n_min, c.n_max, c.boundary, ic.center, ic.width, ic.momentum);
}

int reference_cell(const PropagateConfig& c) {
  if (c.initial.type == "gaussian") return static_cast<int>(std::lround(c.initial.center));
  return c.initial.cell;
}

}  // namespace

int cmd_propagate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  PropagateConfig cfg = parse_propagate(read_config(opts));
  if (opts.quick) cfg.kappa_t_end = std::min(cfg.kappa_t_end, 2.0);
  const json echo = to_json(cfg);

  const double omega = cfg.omega_over_kappa * (cfg.kappa > 0.0 ? cfg.kappa : 1.0);
  const DriveParams drive = DriveParams::resonant(omega, cfg.order, cfg.gamma_norm, cfg.phi, cfg.beta0);
  const LatticeField initial = build_initial(cfg);
  const double t_end = cfg.kappa > 0.0 ? cfg.kappa_t_end / cfg.kappa : cfg.kappa_t_end;
  const double sample_every = drive.period() / cfg.samples_per_period;
  StepControl control;
  control.drift_per_kappa_t = cfg.drift_per_kappa_t;

  const bool cross = cfg.mode == "cross-check";
  const Frame frame = cross ? Frame::gauged : frame_from_string(cfg.mode);
  const Trajectory traj = integrate(frame, initial, cfg.kappa, drive, t_end, sample_every, control);
  if (traj.boundary_leak)
    err << "warning: BoundaryLeak: edge cells exceed 1e-6 of the norm from t = "
        << *traj.boundary_leak_time << "; results near the window edge are untrusted\n";

  const int cell = reference_cell(cfg);
  std::vector<Site> cage = default_cage(cell);
  for (auto it = cage.begin(); it != cage.end();)
    it = initial.contains(*it) ? it + 1 : cage.erase(it);

  std::ostringstream tcsv;
  tcsv << header_line("propagate", echo);
  write_trajectory_csv(tcsv, traj);
  std::ostringstream scsv;
  scsv << header_line("propagate", echo);
  write_summary_csv(scsv, traj, cage, cell);

  int code = kExitOk;
  std::string cross_report;
  if (cross) {
    const Trajectory lab = integrate(Frame::lab, initial, cfg.kappa, drive, t_end, sample_every, control);
    const double dev = max_intensity_deviation(lab, traj);
    const bool ok = dev < cfg.crosscheck_tolerance;
    cross_report = "  lab vs gauged max intensity deviation: " + fmt(dev, 6) + " (tolerance " +
                   fmt(cfg.crosscheck_tolerance, 3) + ") " + (ok ? "PASS" : "FAIL") + "\n";
    if (!ok) code = kExitFailure;
  }

  const fs::path dir = out_dir(opts);
  write_file(dir / "trajectory.csv", tcsv.str());
  write_file(dir / "summary.csv", scsv.str());

  const auto leak = cage_leakage(traj, cage);
  const auto ret = return_intensity(traj, cell);
  double pr_max = 0.0;
  for (const auto& f : traj.snapshots) pr_max = std::max(pr_max, participation_ratio(f));
  out << "propagate (" << cfg.mode << "): " << traj.times.size() << " samples, step " << fmt(traj.step, 6)
      << "\n  max leakage: " << fmt(*std::max_element(leak.begin(), leak.end()), 6)
      << "\n  max PR: " << fmt(pr_max, 6) << "  final PR: " << fmt(participation_ratio(traj.snapshots.back()), 6)
      << "\n  final return intensity: " << fmt(ret.back(), 6)
      << "\n  norm drift: " << fmt(std::abs(traj.norm_history.back() - traj.initial_norm()) / traj.initial_norm(), 3)
      << "\n"
      << cross_report;
  return code;
}

int cmd_design(const CommandOptions& opts, std::ostream& out, std::ostream&) {
  const DesignConfig cfg = parse_design(read_config(opts));
  const json echo = to_json(cfg);
  const FabricationParameters f = fabrication_parameters(cfg.design, cfg.kappa_t_end);
  const NormalizedDesign n = normalize(cfg.design);

  const json doc = {{"version", ABCAGE_VERSION},
                    {"command", "design"},
                    {"config", echo},
                    {"bend_radius_m", f.bend_radius},
                    {"modulation_period_m", f.modulation_period},
                    {"index_depth", f.index_depth},
                    {"array_length_m", f.array_length},
                    {"omega_over_kappa", n.omega_over_kappa},
                    {"sigma_over_omega", n.sigma_over_omega},
                    {"gamma_norm", n.gamma_norm}};
  if (opts.out_dir) write_file(fs::path(*opts.out_dir) / "design.json", doc.dump(2) + "\n");

  if (opts.json) {
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  auto row = [&out](const std::string& key, const std::string& value) {
    out << "  " << std::left << std::setw(20) << key << value << "\n";
  };
  out << "design\n";
  row("bend radius R", fmt(f.bend_radius * 100.0, 6) + " cm");
  row("modulation period T", fmt(f.modulation_period * 1000.0, 6) + " mm");
  row("index depth dn", fmt(f.index_depth, 6));
  row("array length", fmt(f.array_length * 100.0, 6) + " cm  (kappa t = " + fmt(cfg.kappa_t_end, 6) + ")");
  row("omega / kappa", fmt(n.omega_over_kappa, 6));
  row("sigma / omega", fmt(n.sigma_over_omega, 6));
  row("Gamma", fmt(n.gamma_norm, 6));
  return kExitOk;
}

int cmd_validate(const CommandOptions& opts, std::ostream& out, std::ostream&) {
  ValidationOptions v;
  v.quick = opts.quick;
  v.fault = opts.fault;
  v.threads = opts.threads;
  const auto results = run_validation(v);
  int failed = 0;
  for (const auto& r : results) {
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.module << ": " << r.name << "  (" << r.detail
        << ", " << fmt(r.seconds, 3) << " s)\n";
    if (!r.passed) ++failed;
  }
  out << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
      << " properties passed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out,
                std::ostream& err) {
  try {
    if (name == "bands") return cmd_bands(opts, out, err);
    if (name == "quasienergy") return cmd_quasienergy(opts, out, err);
    if (name == "propagate") return cmd_propagate(opts, out, err);
    if (name == "design") return cmd_design(opts, out, err);
    if (name == "validate") return cmd_validate(opts, out, err);
    err << "unknown command '" << name << "'\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace abcage::cli
