#include "abcage/dynamics.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "abcage/rk4.hpp"

namespace abcage {

std::string to_string(Frame frame) {
  switch (frame) {
    case Frame::lab: return "lab";
    case Frame::gauged: return "gauged";
    case Frame::effective: return "effective";
  }
  return "?";
}

Frame frame_from_string(const std::string& s) {
  if (s == "lab") return Frame::lab;
  if (s == "gauged") return Frame::gauged;
  if (s == "effective") return Frame::effective;
  throw std::invalid_argument("unknown frame '" + s + "' (expected lab, gauged or effective)");
}

LatticeField::LatticeField(int n_min, int n_max, Boundary boundary)
    : n_min_(n_min), n_max_(n_max), boundary_(boundary) {
  if (n_max < n_min) throw std::invalid_argument("empty lattice window");
  if (boundary == Boundary::periodic && n_max - n_min + 1 < 2)
    throw std::invalid_argument("periodic window needs at least two cells");
  values_ = Eigen::VectorXcd::Zero(3 * (n_max - n_min + 1));
}

int LatticeField::index(Site s) const {
  if (!contains(s)) {
    std::ostringstream msg;
    msg << "site " << to_char(s.kind) << s.cell << " outside window [" << n_min_ << ", " << n_max_
        << "]";
    throw std::out_of_range(msg.str());
  }
  return 3 * (s.cell - n_min_) + static_cast<int>(s.kind);
}

cplx& LatticeField::at(Site s) { return values_(index(s)); }
cplx LatticeField::at(Site s) const { return values_(index(s)); }

LatticeField single_site_field(int n_min, int n_max, Boundary boundary, Site site) {
  LatticeField f(n_min, n_max, boundary);
  f.at(site) = 1.0;
  return f;
}

LatticeField compact_state_field(int n_min, int n_max, Boundary boundary, const CompactState& state,
                                 int cell) {
  LatticeField f(n_min, n_max, boundary);
  const CompactState shifted = state.translated(cell);
  for (std::size_t i = 0; i < shifted.support.size(); ++i) f.at(shifted.support[i]) += shifted.amplitudes[i];
  return f;
}

LatticeField gaussian_packet_field(int n_min, int n_max, Boundary boundary, double center,
                                   double width, double momentum) {
  if (!(width > 0.0)) throw std::invalid_argument("wave packet width must be positive");
  LatticeField f(n_min, n_max, boundary);
  for (int n = n_min; n <= n_max; ++n) {
    const double x = (n - center) / width;
    f.at({SiteKind::a, n}) = std::polar(std::exp(-0.5 * x * x), momentum * n);
  }
  const double norm = f.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("wave packet has no weight inside the window");
  f.values() /= std::sqrt(norm);
  return f;
}

namespace {

// Right-hand side -i H(t) y for the three pictures. Bonds of the A row are
// c[0] B_n + c[1] B_{n-1} + c[2] C_n + c[3] C_{n-1}; the B and C rows get the
// conjugate amplitudes.
class CoupledModeRhs {
 public:
  CoupledModeRhs(Frame frame, const LatticeField& field, double kappa, const DriveParams& drive)
      : frame_(frame),
        kappa_(kappa),
        drive_(drive),
        n_min_(field.n_min()),
        cells_(field.n_cells()),
        periodic_(field.boundary() == Boundary::periodic) {
    if (frame == Frame::effective) {
      const EffectiveModel eff = effective_params(drive, kappa);
      for (std::size_t l = 0; l < 4; ++l) bonds_[l] = std::polar(eff.kappa0, eff.bond_phases[l]);
    } else if (frame == Frame::lab) {
      bonds_.fill(kappa);
    }
  }

  void operator()(double t, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    if (frame_ == Frame::gauged) {
      const auto p = gauge_phases(drive_, t);
      for (std::size_t l = 0; l < 4; ++l) bonds_[l] = std::polar(kappa_, p[l]);
    }
    const cplx c1 = bonds_[0], c2 = bonds_[1], c3 = bonds_[2], c4 = bonds_[3];
    const cplx c1s = std::conj(c1), c2s = std::conj(c2), c3s = std::conj(c3), c4s = std::conj(c4);

    double up_mod = 0.0, down_mod = 0.0;
    if (frame_ == Frame::lab) {
      up_mod = drive_.amplitude() * std::cos(drive_.omega() * t + drive_.phi());
      down_mod = -drive_.amplitude() * std::cos(drive_.omega() * t - drive_.phi());
    }

    const cplx* v = y.data();
    cplx* out = dy.data();
    for (int i = 0; i < cells_; ++i) {
      const int prev = i > 0 ? i - 1 : (periodic_ ? cells_ - 1 : -1);
      const int next = i + 1 < cells_ ? i + 1 : (periodic_ ? 0 : -1);
      const cplx a = v[3 * i], b = v[3 * i + 1], c = v[3 * i + 2];

      cplx ha = c1 * b + c3 * c;
      if (prev >= 0) ha += c2 * v[3 * prev + 1] + c4 * v[3 * prev + 2];
      cplx hb = c1s * a;
      cplx hc = c3s * a;
      if (next >= 0) {
        hb += c2s * v[3 * next];
        hc += c4s * v[3 * next];
      }
      if (frame_ == Frame::lab) {
        const double n = n_min_ + i;
        const double ramp = drive_.beta0() - (2.0 * n + 1.0) * drive_.sigma();
        ha += (drive_.beta0() - 2.0 * drive_.sigma() * n) * a;
        hb += (ramp + up_mod) * b;
        hc += (ramp + down_mod) * c;
      }
      // -i h
      out[3 * i] = {ha.imag(), -ha.real()};
      out[3 * i + 1] = {hb.imag(), -hb.real()};
      out[3 * i + 2] = {hc.imag(), -hc.real()};
    }
  }

 private:
  Frame frame_;
  double kappa_;
  const DriveParams& drive_;
  int n_min_;
  int cells_;
  bool periodic_;
  std::array<cplx, 4> bonds_{};
};

double edge_intensity(const LatticeField& f) {
  double sum = 0.0;
  const int cells = f.n_cells();
  for (int i = 0; i < cells; ++i) {
    if (i < 2 || i >= cells - 2) {
      for (int k = 0; k < 3; ++k) sum += std::norm(f.values()(3 * i + k));
    }
  }
  return sum;
}

}  // namespace

double automatic_step(Frame frame, const LatticeField& field, double kappa,
                      const DriveParams& drive) {
  double h = drive.period() / 200.0;
  if (kappa > 0.0) h = std::min(h, 0.01 / kappa);
  if (frame == Frame::lab) {
    double onsite = 0.0;
    for (int n : {field.n_min(), field.n_max()}) {
      onsite = std::max(onsite, std::abs(drive.beta0() - 2.0 * drive.sigma() * n));
      onsite = std::max(onsite, std::abs(drive.beta0() - (2.0 * n + 1.0) * drive.sigma()) +
                                    drive.amplitude());
    }
    if (onsite > 0.0) h = std::min(h, 0.005 / onsite);
  }
  return h;
}

Trajectory integrate(Frame frame, const LatticeField& initial, double kappa,
                     const DriveParams& drive, double t_end, double sample_every,
                     const StepControl& control) {
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (!(sample_every > 0.0)) throw std::invalid_argument("sample interval must be positive");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
  if (frame == Frame::lab && initial.boundary() == Boundary::periodic)
    throw std::invalid_argument("the lab frame needs an open boundary (the index ramp is not periodic)");
  const double n0 = initial.norm();
  if (!(n0 > 0.0)) throw std::invalid_argument("initial field has zero norm");

  double h_max = automatic_step(frame, initial, kappa, drive);
  if (control.max_step > 0.0) h_max = std::min(h_max, control.max_step);

  Trajectory traj;
  traj.frame = frame;
  traj.kappa = kappa;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(initial);
  traj.norm_history.push_back(n0);

  CoupledModeRhs rhs(frame, initial, kappa, drive);
  Rk4<Eigen::VectorXcd> stepper;
  LatticeField field = initial;
  const bool check_edges = initial.boundary() == Boundary::open;

  const auto full_intervals = static_cast<long>(std::floor(t_end / sample_every * (1.0 + 1e-12)));
  const long n_sub = static_cast<long>(std::ceil(sample_every / h_max - 1e-9));
  traj.step = sample_every / static_cast<double>(n_sub);

  auto record = [&](double t) {
    const double n = field.norm();
    const double drift = std::abs(n - n0) / n0;
    if (control.enforce_norm && drift > control.drift_per_kappa_t * std::max(kappa * t, 1.0)) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " at t=" << t << " exceeds the bound";
      throw NormDriftError(msg.str());
    }
    if (check_edges && !traj.boundary_leak && edge_intensity(field) > 1e-6 * n0) {
      traj.boundary_leak = true;
      traj.boundary_leak_time = t;
    }
    traj.times.push_back(t);
    traj.snapshots.push_back(field);
    traj.norm_history.push_back(n);
  };

  for (long j = 0; j < full_intervals; ++j) {
    const double t0 = static_cast<double>(j) * sample_every;
    for (long k = 0; k < n_sub; ++k)
      stepper.step(field.values(), t0 + static_cast<double>(k) * traj.step, traj.step, rhs);
    record(static_cast<double>(j + 1) * sample_every);
  }
  const double t_last = static_cast<double>(full_intervals) * sample_every;
  const double rest = t_end - t_last;
  if (rest > 1e-12 * std::max(1.0, t_end)) {
    const long m = static_cast<long>(std::ceil(rest / h_max - 1e-9));
    const double h = rest / static_cast<double>(m);
    for (long k = 0; k < m; ++k) stepper.step(field.values(), t_last + static_cast<double>(k) * h, h, rhs);
    record(t_end);
  }
  return traj;
}

std::vector<Site> default_cage(int cell) {
  return {{SiteKind::a, cell},
          {SiteKind::b, cell},
          {SiteKind::b, cell - 1},
          {SiteKind::c, cell},
          {SiteKind::c, cell - 1}};
}

std::vector<double> cage_leakage(const Trajectory& traj, std::span<const Site> cage) {
  const double n0 = traj.initial_norm();
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const auto& f : traj.snapshots) {
    double inside = 0.0;
    for (const Site& s : cage) inside += f.intensity(s);
    out.push_back(std::clamp(1.0 - inside / n0, 0.0, 1.0));
  }
  return out;
}

double participation_ratio(const LatticeField& field) {
  const double n = field.norm();
  if (!(n > 0.0)) throw std::invalid_argument("participation ratio of a zero field");
  double sum_sq = 0.0;
  for (Eigen::Index i = 0; i < field.values().size(); ++i) {
    const double in = std::norm(field.values()(i));
    sum_sq += in * in;
  }
  return n * n / sum_sq;
}

std::vector<double> return_intensity(const Trajectory& traj, int cell) {
  const double n0 = traj.initial_norm();
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const auto& f : traj.snapshots)
    out.push_back(std::clamp(f.intensity({SiteKind::a, cell}) / n0, 0.0, 1.0));
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,site_kind,n,intensity\n";
  os << std::setprecision(17);
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const LatticeField& f = traj.snapshots[s];
    for (int n = f.n_min(); n <= f.n_max(); ++n)
      for (SiteKind k : {SiteKind::a, SiteKind::b, SiteKind::c})
        os << traj.times[s] << ',' << to_char(k) << ',' << n << ',' << f.intensity({k, n}) << '\n';
  }
}

void write_summary_csv(std::ostream& os, const Trajectory& traj, std::span<const Site> cage,
                       int return_cell) {
  const auto leak = cage_leakage(traj, cage);
  const auto ret = return_intensity(traj, return_cell);
  os << "t,norm,PR,leakage,return_intensity\n";
  os << std::setprecision(17);
  for (std::size_t s = 0; s < traj.times.size(); ++s)
    os << traj.times[s] << ',' << traj.norm_history[s] << ','
       << participation_ratio(traj.snapshots[s]) << ',' << leak[s] << ',' << ret[s] << '\n';
}

double max_intensity_deviation(const Trajectory& lhs, const Trajectory& rhs) {
  if (lhs.times.size() != rhs.times.size())
    throw std::invalid_argument("trajectories have different sample counts");
  double worst = 0.0;
  for (std::size_t s = 0; s < lhs.times.size(); ++s) {
    const auto& x = lhs.snapshots[s].values();
    const auto& y = rhs.snapshots[s].values();
    if (x.size() != y.size()) throw std::invalid_argument("trajectories have different windows");
    for (Eigen::Index i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::abs(std::norm(x(i)) - std::norm(y(i))));
  }
  return worst;
}

}  // namespace abcage
