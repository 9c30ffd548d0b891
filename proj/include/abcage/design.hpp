#pragma once

// Normalized lattice parameters -> fabrication parameters of a
// femtosecond-laser-written rhombic waveguide array. All quantities SI.

namespace abcage {

struct PhysicalDesign {
  double wavelength = 633e-9;     // m
  double substrate_index = 1.46;  // n_s
  double half_spacing = 13.5e-6;  // d (m); same-row guides sit 2d apart
  double kappa = 1e2;             // coupling rate, m^-1
  double sigma = 1e3;             // transverse index gradient, m^-1
  double omega = 1e3;             // longitudinal modulation frequency, m^-1
  double gamma_norm = 2.0;        // Gamma = A / omega

  /// Throws std::invalid_argument unless lengths and rates are positive, n_s > 1, Gamma >= 0.
  void validate() const;
};

struct FabricationParameters {
  double bend_radius = 0.0;        // R = 2 pi n_s d / (sigma lambda), m
  double modulation_period = 0.0;  // T = 2 pi / omega, m
  double index_depth = 0.0;        // delta n = Gamma lambda / T
  double array_length = 0.0;       // physical length of a run to kappa t = kappa_t_end, m
};

FabricationParameters fabrication_parameters(const PhysicalDesign& design, double kappa_t_end = 10.0);

// Dimensionless form plus the scales needed to restore physical units.
struct NormalizedDesign {
  double omega_over_kappa = 0.0;
  double gamma_norm = 0.0;
  double sigma_over_omega = 0.0;
  double kappa = 0.0;
  double wavelength = 0.0;
  double substrate_index = 0.0;
  double half_spacing = 0.0;
};

NormalizedDesign normalize(const PhysicalDesign& design);
PhysicalDesign denormalize(const NormalizedDesign& normalized);

}  // namespace abcage
