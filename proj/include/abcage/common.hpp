#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abcage {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class SiteKind { a = 0, b = 1, c = 2 };
enum class Boundary { periodic, open };

/// Folds an angle into (-pi, pi].
inline double fold_phase(double x) {
  double y = std::remainder(x, 2.0 * pi);  // [-pi, pi]
  if (y <= -pi) y += 2.0 * pi;
  return y;
}

/// Shortest signed distance between two angles, in [-pi, pi].
inline double phase_distance(double x, double y) { return std::remainder(x - y, 2.0 * pi); }

char to_char(SiteKind kind);
SiteKind site_kind_from_char(char c);
std::string to_string(Boundary boundary);
Boundary boundary_from_string(const std::string& s);

// Numerical failures (exit code 3 at the command line).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NormDriftError : NumericalError {
  using NumericalError::NumericalError;
};
struct UnitarityLossError : NumericalError {
  using NumericalError::NumericalError;
};
struct QuadratureError : NumericalError {
  using NumericalError::NumericalError;
};

}  // namespace abcage
