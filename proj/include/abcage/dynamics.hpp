#pragma once

// Propagation of the coupled-mode equations of the driven rhombic chain.
//
//   lab:       i da_n/dt = kappa (b_n + b_{n-1} + c_n + c_{n-1}) + V_n(t) a_n
//              i db_n/dt = kappa (a_n + a_{n+1}) + W_n(t) b_n
//              i dc_n/dt = kappa (a_n + a_{n+1}) + X_n(t) c_n
//   gauged:    on-site terms removed, bonds carry e^{+-i phi_l(t)}
//   effective: cycle-averaged bonds kappa0 e^{+-i theta_l}, time independent
//
// |a_n|^2, |b_n|^2, |c_n|^2 are the same in all three pictures (the gauge
// transformation is a site-local phase), up to the high-frequency corrections
// of the effective model.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "abcage/common.hpp"
#include "abcage/drive.hpp"
#include "abcage/lattice.hpp"

namespace abcage {

enum class Frame { lab, gauged, effective };

std::string to_string(Frame frame);
Frame frame_from_string(const std::string& s);

/// Complex modal amplitudes on cells n_min..n_max (inclusive).
class LatticeField {
 public:
  LatticeField(int n_min, int n_max, Boundary boundary);

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  int n_cells() const { return n_max_ - n_min_ + 1; }
  Boundary boundary() const { return boundary_; }

  bool contains(Site s) const { return s.cell >= n_min_ && s.cell <= n_max_; }
  /// Throws std::out_of_range for sites outside the window.
  cplx& at(Site s);
  cplx at(Site s) const;
  double intensity(Site s) const { return std::norm(at(s)); }
  double norm() const { return values_.squaredNorm(); }

  /// Layout: 3 * (n - n_min) + kind.
  Eigen::VectorXcd& values() { return values_; }
  const Eigen::VectorXcd& values() const { return values_; }

 private:
  int index(Site s) const;

  int n_min_;
  int n_max_;
  Boundary boundary_;
  Eigen::VectorXcd values_;
};

// Initial conditions.
LatticeField single_site_field(int n_min, int n_max, Boundary boundary, Site site);
/// Places `state` (translated to `cell`) in the window; amplitudes kept as given.
LatticeField compact_state_field(int n_min, int n_max, Boundary boundary, const CompactState& state,
                                 int cell);
/// Normalized Gaussian on the hub row: a_n ~ exp(-(n-center)^2 / (2 width^2) + i momentum n).
LatticeField gaussian_packet_field(int n_min, int n_max, Boundary boundary, double center,
                                   double width, double momentum);

struct StepControl {
  double max_step = 0.0;                // <= 0: automatic
  double drift_per_kappa_t = 1e-8;      // NormDrift threshold
  bool enforce_norm = true;
};

struct Trajectory {
  Frame frame = Frame::gauged;
  double kappa = 0.0;
  double step = 0.0;
  std::vector<double> times;
  std::vector<LatticeField> snapshots;
  std::vector<double> norm_history;
  // Set when the outermost two cells on either side carry more than 1e-6 N(0).
  bool boundary_leak = false;
  std::optional<double> boundary_leak_time;

  double initial_norm() const { return norm_history.front(); }
};

/// Step actually used by `integrate` before it is shrunk to divide the
/// sampling interval: min(T/200, 0.01/kappa), and for the lab frame also
/// 0.01 / max|on-site term| over the window.
double automatic_step(Frame frame, const LatticeField& field, double kappa,
                      const DriveParams& drive);

/// Samples at t = 0, sample_every, 2 sample_every, ... and at t_end.
/// Throws NormDriftError when |N(t) - N(0)| / N(0) exceeds
/// drift_per_kappa_t * max(kappa t, 1), std::invalid_argument for bad inputs.
Trajectory integrate(Frame frame, const LatticeField& initial, double kappa,
                     const DriveParams& drive, double t_end, double sample_every,
                     const StepControl& control = {});

/// Sites coupled to a_cell, plus a_cell itself.
std::vector<Site> default_cage(int cell = 0);

/// 1 - (intensity on cage) / N(0), clamped to [0, 1].
std::vector<double> cage_leakage(const Trajectory& traj, std::span<const Site> cage);

/// N^2 / sum_s I_s^2. Throws std::invalid_argument for a zero field.
double participation_ratio(const LatticeField& field);

/// |a_cell(t)|^2 / N(0).
std::vector<double> return_intensity(const Trajectory& traj, int cell);

/// Columns: t, site_kind, n, intensity (17 significant digits).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Columns: t, norm, PR, leakage, return_intensity.
void write_summary_csv(std::ostream& os, const Trajectory& traj, std::span<const Site> cage,
                       int return_cell);

/// Largest per-site intensity difference between two trajectories sampled
/// on the same times and window.
double max_intensity_deviation(const Trajectory& lhs, const Trajectory& rhs);

}  // namespace abcage
