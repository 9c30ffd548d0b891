#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "abcage/bessel.hpp"
#include "abcage/design.hpp"
#include "abcage/drive.hpp"
#include "abcage/dynamics.hpp"
#include "abcage/floquet.hpp"
#include "abcage/lattice.hpp"

namespace py = pybind11;
using namespace abcage;

namespace {

std::vector<std::array<double, 3>> band_rows(const BlochBands& b) {
  std::vector<std::array<double, 3>> rows;
  rows.reserve(b.bands.size());
  for (const auto& e : b.bands) rows.push_back({e.minus, e.zero, e.plus});
  return rows;
}

Site parse_site(const std::string& kind, int cell) {
  if (kind.size() != 1) throw std::invalid_argument("site kind must be 'a', 'b' or 'c'");
  return {site_kind_from_char(kind[0]), cell};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Driven rhombic lattice: static bands, Floquet spectra, propagation, design.";
  m.attr("__version__") = ABCAGE_VERSION;

  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  // core model
  m.def("static_dispersion", [](double kappa, double gamma, double q) {
    const BandTriple e = static_dispersion(kappa, gamma, q);
    return std::array<double, 3>{e.minus, e.zero, e.plus};
  }, py::arg("kappa"), py::arg("gamma"), py::arg("q"));
  m.def("brillouin_grid", &brillouin_grid, py::arg("n"));
  m.def("static_bands", [](double kappa, double gamma, int n_q) {
    const BlochBands b = static_bands(kappa, gamma, n_q);
    return py::make_tuple(b.q_grid, band_rows(b));
  }, py::arg("kappa"), py::arg("gamma"), py::arg("n_q") = 256,
     "Returns (q_grid, [[E-, E0, E+], ...]).");
  m.def("static_hamiltonian", [](double kappa, double gamma, int n_cells, const std::string& boundary) {
    return build_static_hamiltonian(FluxedRhombicParams(kappa, gamma, n_cells, boundary_from_string(boundary)));
  }, py::arg("kappa"), py::arg("gamma"), py::arg("n_cells"), py::arg("boundary") = "periodic");
  m.def("compact_states", [](double kappa) {
    py::list out;
    for (const CompactState& s : compact_flat_band_states(kappa)) {
      py::list support;
      for (const Site& site : s.support) support.append(py::make_tuple(std::string(1, to_char(site.kind)), site.cell));
      py::dict d;
      d["energy"] = s.energy;
      d["support"] = support;
      d["amplitudes"] = s.amplitudes;
      out.append(d);
    }
    return out;
  }, py::arg("kappa") = 1.0);

  // drive
  m.def("bessel_j", &bessel_j, py::arg("order"), py::arg("x"));
  m.def("bessel_j_zero", &bessel_j_zero, py::arg("order"), py::arg("k"), py::arg("tol") = 1e-13);

  py::class_<DriveParams>(m, "Drive")
      .def(py::init([](double omega, int order, double gamma_norm, double phi, double beta0) {
             return DriveParams::resonant(omega, order, gamma_norm, phi, beta0);
           }),
           py::arg("omega"), py::arg("order") = 1, py::arg("gamma_norm") = 2.0, py::arg("phi") = 0.0,
           py::arg("beta0") = 0.0)
      .def_property_readonly("omega", &DriveParams::omega)
      .def_property_readonly("sigma", &DriveParams::sigma)
      .def_property_readonly("amplitude", &DriveParams::amplitude)
      .def_property_readonly("phi", &DriveParams::phi)
      .def_property_readonly("order", &DriveParams::order)
      .def_property_readonly("gamma_norm", &DriveParams::gamma_norm)
      .def_property_readonly("period", &DriveParams::period)
      .def("gauge_phases", [](const DriveParams& d, double t) { return gauge_phases(d, t); }, py::arg("t"))
      .def("cycle_averaged_coupling", [](const DriveParams& d, int l) { return cycle_averaged_coupling(d, l); },
           py::arg("l"));

  py::class_<EffectiveModel>(m, "EffectiveModel")
      .def_readonly("kappa0", &EffectiveModel::kappa0)
      .def_readonly("phi1_eff", &EffectiveModel::phi1_eff)
      .def_readonly("phi2_eff", &EffectiveModel::phi2_eff)
      .def_readonly("gamma_eff", &EffectiveModel::gamma_eff)
      .def_readonly("bond_phases", &EffectiveModel::bond_phases);
  m.def("effective_params", &effective_params, py::arg("drive"), py::arg("kappa") = 1.0);
  m.def("plaquette_flux", py::overload_cast<const std::array<cplx, 4>&>(&plaquette_flux), py::arg("couplings"));

  // floquet
  m.def("monodromy", [](double q, const DriveParams& d, double kappa, int steps) {
    MonodromyControl c;
    c.steps_per_period = steps;
    return Eigen::MatrixXcd(monodromy(q, d, kappa, c));
  }, py::arg("q"), py::arg("drive"), py::arg("kappa") = 1.0, py::arg("steps_per_period") = 400);
  m.def("quasienergies", [](const DriveParams& d, double kappa, const std::vector<double>& q_grid) {
    return floquet_spectrum(d, kappa, q_grid).epsilon;
  }, py::arg("drive"), py::arg("kappa"), py::arg("q_grid"));
  m.def("effective_dispersion", &effective_dispersion, py::arg("effective"), py::arg("q"));
  m.def("fold_quasienergy", &fold_quasienergy, py::arg("eps"), py::arg("omega"));
  m.def("sweep", [](const std::vector<double>& gamma_axis, int q_points, double phi, int order,
                    double omega_over_kappa, double kappa, int threads) {
    SweepConfig c;
    c.gamma_axis = gamma_axis;
    c.q_grid = brillouin_grid(q_points);
    c.phi = phi;
    c.order = order;
    c.omega_over_kappa = omega_over_kappa;
    c.kappa = kappa;
    c.threads = threads;
    const SweepTable t = [&] {
      py::gil_scoped_release release;
      return sweep(c);
    }();
    py::dict out;
    std::vector<double> g, q;
    std::vector<std::array<double, 3>> eps, eff;
    for (const SweepRow& r : t.rows) {
      g.push_back(r.gamma_norm);
      q.push_back(r.q);
      eps.push_back(r.eps);
      eff.push_back(r.eps_eff);
    }
    out["gamma_norm"] = g;
    out["q"] = q;
    out["eps"] = eps;
    out["eps_eff"] = eff;
    out["max_effective_deviation"] = t.max_effective_deviation();
    out["max_unitarity_defect"] = t.max_unitarity_defect();
    return out;
  }, py::arg("gamma_axis"), py::arg("q_points") = 64, py::arg("phi") = 0.0, py::arg("order") = 1,
     py::arg("omega_over_kappa") = 15.0, py::arg("kappa") = 1.0, py::arg("threads") = 1);

  // dynamics
  m.def("propagate", [](const std::string& frame, const DriveParams& d, double kappa, double t_end,
                        double sample_every, int n_min, int n_max, const std::string& kind, int cell) {
    const LatticeField f0 = single_site_field(n_min, n_max, Boundary::open, parse_site(kind, cell));
    const Trajectory tr = [&] {
      py::gil_scoped_release release;
      return integrate(frame_from_string(frame), f0, kappa, d, t_end, sample_every);
    }();
    const auto cage = default_cage(cell);
    std::vector<double> pr;
    for (const auto& s : tr.snapshots) pr.push_back(participation_ratio(s));
    std::vector<Eigen::VectorXd> intensities;
    for (const auto& s : tr.snapshots) intensities.push_back(s.values().cwiseAbs2());
    py::dict out;
    out["t"] = tr.times;
    out["norm"] = tr.norm_history;
    out["participation_ratio"] = pr;
    out["leakage"] = cage_leakage(tr, cage);
    out["return_intensity"] = return_intensity(tr, cell);
    out["intensities"] = intensities;
    out["boundary_leak"] = tr.boundary_leak;
    return out;
  }, py::arg("frame"), py::arg("drive"), py::arg("kappa") = 1.0, py::arg("t_end") = 10.0,
     py::arg("sample_every") = 0.1, py::arg("n_min") = -30, py::arg("n_max") = 30, py::arg("kind") = "a",
     py::arg("cell") = 0,
     "Single-site excitation in an open window; intensities are ordered 3 (n - n_min) + kind.");

  // design
  py::class_<PhysicalDesign>(m, "PhysicalDesign")
      .def(py::init<>())
      .def_readwrite("wavelength", &PhysicalDesign::wavelength)
      .def_readwrite("substrate_index", &PhysicalDesign::substrate_index)
      .def_readwrite("half_spacing", &PhysicalDesign::half_spacing)
      .def_readwrite("kappa", &PhysicalDesign::kappa)
      .def_readwrite("sigma", &PhysicalDesign::sigma)
      .def_readwrite("omega", &PhysicalDesign::omega)
      .def_readwrite("gamma_norm", &PhysicalDesign::gamma_norm);
  py::class_<FabricationParameters>(m, "FabricationParameters")
      .def_readonly("bend_radius", &FabricationParameters::bend_radius)
      .def_readonly("modulation_period", &FabricationParameters::modulation_period)
      .def_readonly("index_depth", &FabricationParameters::index_depth)
      .def_readonly("array_length", &FabricationParameters::array_length);
  m.def("fabrication_parameters", &fabrication_parameters, py::arg("design"), py::arg("kappa_t_end") = 10.0);
}
