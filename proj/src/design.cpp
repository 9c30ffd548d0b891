#include "abcage/design.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abcage {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

}  // namespace

void PhysicalDesign::validate() const {
  require_positive(wavelength, "wavelength");
  require_positive(half_spacing, "half_spacing");
  require_positive(kappa, "kappa");
  require_positive(sigma, "sigma");
  require_positive(omega, "omega");
  if (!(substrate_index > 1.0) || !std::isfinite(substrate_index))
    throw std::invalid_argument("substrate_index must exceed 1");
  if (!(gamma_norm >= 0.0) || !std::isfinite(gamma_norm))
    throw std::invalid_argument("gamma_norm must be non-negative");
}

FabricationParameters fabrication_parameters(const PhysicalDesign& d, double kappa_t_end) {
  d.validate();
  if (!(kappa_t_end >= 0.0)) throw std::invalid_argument("kappa_t_end must be non-negative");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  FabricationParameters f;
  f.bend_radius = two_pi * d.substrate_index * d.half_spacing / (d.sigma * d.wavelength);
  f.modulation_period = two_pi / d.omega;
  f.index_depth = d.gamma_norm * d.wavelength / f.modulation_period;
  f.array_length = kappa_t_end / d.kappa;
  return f;
}

NormalizedDesign normalize(const PhysicalDesign& d) {
  d.validate();
  return {d.omega / d.kappa, d.gamma_norm,        d.sigma / d.omega, d.kappa,
          d.wavelength,      d.substrate_index,   d.half_spacing};
}

PhysicalDesign denormalize(const NormalizedDesign& n) {
  PhysicalDesign d;
  d.wavelength = n.wavelength;
  d.substrate_index = n.substrate_index;
  d.half_spacing = n.half_spacing;
  d.kappa = n.kappa;
  d.omega = n.omega_over_kappa * n.kappa;
  d.sigma = n.sigma_over_omega * d.omega;
  d.gamma_norm = n.gamma_norm;
  d.validate();
  return d;
}

}  // namespace abcage
