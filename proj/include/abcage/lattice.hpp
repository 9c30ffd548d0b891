#pragma once

// Static rhombic (diamond) chain threaded by a uniform flux per plaquette.
//
// Unit cell n holds the hub site a_n and the rim sites b_n (upper row) and
// c_n (lower row). Bonds: a_n-b_n, a_n-b_{n-1}, a_n-c_n, a_n-c_{n-1}.
// Plaquette n is the square a_n, b_n, a_{n+1}, c_n.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "abcage/common.hpp"

namespace abcage {

class FluxedRhombicParams {
 public:
  /// Throws std::invalid_argument unless kappa > 0 and n_cells >= 2.
  /// gamma is folded into (-pi, pi].
  FluxedRhombicParams(double kappa, double gamma, int n_cells, Boundary boundary);

  double kappa() const { return kappa_; }
  double gamma() const { return gamma_; }
  int n_cells() const { return n_cells_; }
  Boundary boundary() const { return boundary_; }

 private:
  double kappa_;
  double gamma_;
  int n_cells_;
  Boundary boundary_;
};

struct BandTriple {
  double minus = 0.0;
  double zero = 0.0;
  double plus = 0.0;
};

struct BlochBands {
  std::vector<double> q_grid;
  std::vector<BandTriple> bands;
};

/// Uniform grid of n momenta in [-pi, pi).
std::vector<double> brillouin_grid(int n);

/// E_0 = 0, E_+- = +-2 kappa sqrt(1 + cos(gamma/2) cos(q - gamma/2)).
/// Throws std::domain_error when the radicand is below -1e-12.
BandTriple static_dispersion(double kappa, double gamma, double q);

BlochBands static_bands(double kappa, double gamma, int n_q = 256);

// Where the Peierls phases sit. Both choices put flux gamma through every
// plaquette. On an open chain they differ by a site-local gauge
// transformation; on a ring of N cells the distributed choice also threads an
// extra N gamma / 2 through the ring, so the two spectra agree only when that
// is a multiple of 2 pi.
enum class PeierlsGauge {
  single_bond,  // e^{i gamma} on the a_n-c_n bond, every other bond real
  distributed,  // e^{i gamma/4} on each of the four plaquette bonds
};

/// Row/column of a site in the 3*n_cells matrix: 3*cell + kind.
inline int site_index(SiteKind kind, int cell) { return 3 * cell + static_cast<int>(kind); }

Eigen::MatrixXcd build_static_hamiltonian(const FluxedRhombicParams& params,
                                          PeierlsGauge gauge = PeierlsGauge::single_bond);

/// Product of H(to, from) around plaquette `cell` (a_n -> b_n -> a_{n+1} -> c_n -> a_n),
/// divided by kappa^4. Equals e^{i gamma} for every plaquette.
cplx plaquette_holonomy(const Eigen::MatrixXcd& h, int cell, int n_cells, double kappa);

struct Site {
  SiteKind kind = SiteKind::a;
  int cell = 0;
  friend bool operator==(const Site&, const Site&) = default;
};

struct CompactState {
  std::vector<Site> support;
  std::vector<cplx> amplitudes;  // unit norm
  double energy = 0.0;

  /// Copy translated by `shift` cells.
  CompactState translated(int shift) const;
  /// Dense vector on a chain of n_cells cells (support cells taken mod n_cells).
  Eigen::VectorXcd embed(int n_cells) const;
};

/// Compact eigenstates of the gamma = pi chain (single-bond gauge) localized
/// around hub a_0, ordered by energy {0, +2 kappa, -2 kappa}. Obtained by
/// diagonalizing the two-plaquette block restricted to rim combinations that
/// do not couple to a_{-1} or a_{+1}.
std::array<CompactState, 3> compact_flat_band_states(double kappa);

}  // namespace abcage
