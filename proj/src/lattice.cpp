#include "abcage/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace abcage {

char to_char(SiteKind kind) {
  switch (kind) {
    case SiteKind::a: return 'a';
    case SiteKind::b: return 'b';
    case SiteKind::c: return 'c';
  }
  return '?';
}

SiteKind site_kind_from_char(char c) {
  switch (c) {
    case 'a': return SiteKind::a;
    case 'b': return SiteKind::b;
    case 'c': return SiteKind::c;
    default: break;
  }
  throw std::invalid_argument(std::string("unknown site kind '") + c + "'");
}

std::string to_string(Boundary boundary) {
  return boundary == Boundary::periodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary '" + s + "' (expected periodic or open)");
}

FluxedRhombicParams::FluxedRhombicParams(double kappa, double gamma, int n_cells, Boundary boundary)
    : kappa_(kappa), gamma_(fold_phase(gamma)), n_cells_(n_cells), boundary_(boundary) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::invalid_argument("kappa must be positive and finite");
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  if (n_cells < 2) throw std::invalid_argument("n_cells must be at least 2");
}

std::vector<double> brillouin_grid(int n) {
  if (n < 1) throw std::invalid_argument("momentum grid needs at least one point");
  std::vector<double> q(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) q[static_cast<std::size_t>(j)] = -pi + 2.0 * pi * j / n;
  return q;
}

BandTriple static_dispersion(double kappa, double gamma, double q) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  double radicand = 1.0 + std::cos(gamma / 2.0) * std::cos(q - gamma / 2.0);
  if (radicand < 0.0) {
    if (radicand < -1e-12) {
      std::ostringstream msg;
      msg << "negative dispersion radicand " << radicand << " at gamma=" << gamma << ", q=" << q;
      throw std::domain_error(msg.str());
    }
    radicand = 0.0;
  }
  const double e = 2.0 * kappa * std::sqrt(radicand);
  return {-e, 0.0, e};
}

BlochBands static_bands(double kappa, double gamma, int n_q) {
  BlochBands out;
  out.q_grid = brillouin_grid(n_q);
  out.bands.reserve(out.q_grid.size());
  for (double q : out.q_grid) out.bands.push_back(static_dispersion(kappa, gamma, q));
  return out;
}

Eigen::MatrixXcd build_static_hamiltonian(const FluxedRhombicParams& params, PeierlsGauge gauge) {
  const int n = params.n_cells();
  const double kappa = params.kappa();
  const double gamma = params.gamma();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(3 * n, 3 * n);

  // Sets the amplitude for hopping from -> to, and its Hermitian partner.
  auto hop = [&h](int to, int from, cplx amp) {
    h(to, from) = amp;
    h(from, to) = std::conj(amp);
  };

  const cplx quarter = std::polar(kappa, gamma / 4.0);
  for (int cell = 0; cell < n; ++cell) {
    const int a = site_index(SiteKind::a, cell);
    const int b = site_index(SiteKind::b, cell);
    const int c = site_index(SiteKind::c, cell);
    const bool has_next = cell + 1 < n || params.boundary() == Boundary::periodic;
    const int a_next = site_index(SiteKind::a, (cell + 1) % n);

    if (gauge == PeierlsGauge::single_bond) {
      hop(b, a, kappa);
      hop(a, c, std::polar(kappa, gamma));
      if (has_next) {
        hop(a_next, b, kappa);
        hop(c, a_next, kappa);
      }
    } else {
      // Loop a_n -> b_n -> a_{n+1} -> c_n -> a_n, gamma/4 per step.
      hop(b, a, quarter);
      hop(a, c, quarter);
      if (has_next) {
        hop(a_next, b, quarter);
        hop(c, a_next, quarter);
      }
    }
  }
  return h;
}

cplx plaquette_holonomy(const Eigen::MatrixXcd& h, int cell, int n_cells, double kappa) {
  const int a = site_index(SiteKind::a, cell);
  const int b = site_index(SiteKind::b, cell);
  const int c = site_index(SiteKind::c, cell);
  const int a_next = site_index(SiteKind::a, (cell + 1) % n_cells);
  const cplx loop = h(b, a) * h(a_next, b) * h(c, a_next) * h(a, c);
  return loop / std::pow(kappa, 4);
}

CompactState CompactState::translated(int shift) const {
  CompactState out = *this;
  for (auto& s : out.support) s.cell += shift;
  return out;
}

Eigen::VectorXcd CompactState::embed(int n_cells) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(3 * n_cells);
  for (std::size_t i = 0; i < support.size(); ++i) {
    const int cell = ((support[i].cell % n_cells) + n_cells) % n_cells;
    v(site_index(support[i].kind, cell)) += amplitudes[i];
  }
  return v;
}

std::array<CompactState, 3> compact_flat_band_states(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");

  // A 4-cell ring is the smallest one where a_{-1}, a_0 and a_{+1} are distinct.
  constexpr int ring = 4;
  const Eigen::MatrixXcd h =
      build_static_hamiltonian(FluxedRhombicParams(kappa, pi, ring, Boundary::periodic));
  auto idx = [](SiteKind k, int cell) { return site_index(k, ((cell % ring) + ring) % ring); };

  const std::array<Site, 5> cage = {Site{SiteKind::a, 0}, Site{SiteKind::b, -1},
                                    Site{SiteKind::c, -1}, Site{SiteKind::b, 0},
                                    Site{SiteKind::c, 0}};
  Eigen::Matrix<cplx, 5, 5> block;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      block(i, j) = h(idx(cage[i].kind, cage[i].cell), idx(cage[j].kind, cage[j].cell));

  // Couplings from the four rim sites out to the neighbouring hubs.
  Eigen::Matrix<cplx, 2, 4> leak;
  for (int j = 0; j < 4; ++j) {
    const int col = idx(cage[j + 1].kind, cage[j + 1].cell);
    leak(0, j) = h(idx(SiteKind::a, -1), col);
    leak(1, j) = h(idx(SiteKind::a, 1), col);
  }
  Eigen::JacobiSVD<Eigen::Matrix<cplx, 2, 4>> svd(leak, Eigen::ComputeFullV);
  const Eigen::Matrix<cplx, 4, 2> rim_kernel = svd.matrixV().rightCols<2>();

  Eigen::Matrix<cplx, 5, 3> basis = Eigen::Matrix<cplx, 5, 3>::Zero();
  basis(0, 0) = 1.0;
  basis.block<4, 2>(1, 1) = rim_kernel;

  const Eigen::Matrix3cd reduced = basis.adjoint() * block * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> eig(reduced);

  const std::array<double, 3> nominal = {0.0, 2.0 * kappa, -2.0 * kappa};
  std::array<CompactState, 3> out;
  for (int s = 0; s < 3; ++s) {
    int col = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(eig.eigenvalues()(k) - nominal[s]) <
          std::abs(eig.eigenvalues()(col) - nominal[s]))
        col = k;
    if (std::abs(eig.eigenvalues()(col) - nominal[s]) > 1e-12 * kappa)
      throw std::logic_error("restricted cage block has an unexpected spectrum");

    Eigen::Matrix<cplx, 5, 1> psi = basis * eig.eigenvectors().col(col);
    int pivot = 0;
    for (int i = 1; i < 5; ++i)
      if (std::abs(psi(i)) > std::abs(psi(pivot)) + 1e-12) pivot = i;
    psi *= std::polar(1.0, -std::arg(psi(pivot)));
    psi.normalize();

    CompactState& st = out[static_cast<std::size_t>(s)];
    st.energy = nominal[s];
    for (int i = 0; i < 5; ++i) {
      if (std::abs(psi(i)) < 1e-13) continue;
      st.support.push_back(cage[i]);
      cplx amp = psi(i);
      if (std::abs(amp.imag()) < 1e-15) amp.imag(0.0);
      st.amplitudes.push_back(amp);
    }
  }
  return out;
}

}  // namespace abcage
