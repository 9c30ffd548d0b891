#include "abcage/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace abcage {
namespace {

double series(int n, double x) {
  // sum_k (-1)^k (x/2)^{2k+n} / (k! (k+n)!)
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  double sum = term;
  const double h2 = half * half;
  for (int k = 1; k < 200; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double miller(int n, double x) {
  // Start well above max(n, x) so the seeded minimal solution dominates.
  const int start = 2 * ((std::max(n, static_cast<int>(x)) + 20 +
                          static_cast<int>(std::sqrt(60.0 * std::max(n, static_cast<int>(x))))) /
                         2);
  const double two_over_x = 2.0 / x;
  double j_next = 0.0;  // J_{k+1}
  double j_cur = 1e-300;  // J_k
  double norm = 0.0;    // J_0 + 2 sum J_{2k}
  double result = 0.0;
  for (int k = start; k > 0; --k) {
    const double j_prev = k * two_over_x * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;
    if (std::abs(j_cur) > 1e250) {  // rescale to avoid overflow
      j_cur *= 1e-250;
      j_next *= 1e-250;
      norm *= 1e-250;
      result *= 1e-250;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j_cur;
    if (k - 1 == n) result = j_cur;
  }
  norm += j_cur;
  return result / norm;
}

}  // namespace

double bessel_j(int order, double x) {
  if (!std::isfinite(x)) throw std::domain_error("bessel_j: non-finite argument");
  double sign = 1.0;
  if (order < 0) {
    order = -order;
    if (order % 2 != 0) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (order % 2 != 0) sign = -sign;
  }
  if (x == 0.0) return order == 0 ? sign : 0.0;
  if (x > 1e4) throw std::domain_error("bessel_j: argument outside supported range");
  if (x < 1.0) return sign * series(order, x);
  return sign * miller(order, x);
}

double bessel_j_zero(int order, int k, double tol) {
  if (k < 1) throw std::invalid_argument("bessel_j_zero: k must be >= 1");
  if (order < 0) order = -order;
  const double step = 0.05;
  double lo = order == 0 ? step : order;  // zeros of J_n lie beyond n for n >= 1
  double f_lo = bessel_j(order, lo);
  int found = 0;
  for (double hi = lo + step; hi < 1e4; hi += step) {
    const double f_hi = bessel_j(order, hi);
    if (f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0)) {
      if (++found == k) {
        if (f_lo == 0.0) return lo;
        double a = lo, b = hi, fa = f_lo;
        while (b - a > tol) {
          const double m = 0.5 * (a + b);
          const double fm = bessel_j(order, m);
          if (fm == 0.0) return m;
          if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
          } else {
            b = m;
          }
        }
        return 0.5 * (a + b);
      }
    }
    lo = hi;
    f_lo = f_hi;
  }
  throw std::runtime_error("bessel_j_zero: zero not found");
}

}  // namespace abcage
