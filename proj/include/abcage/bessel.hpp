#pragma once

namespace abcage {

/// Bessel function of the first kind J_n(x) for integer order n.
/// Power series for small |x|, Miller's normalized downward recurrence otherwise.
double bessel_j(int order, double x);

/// k-th positive zero (k >= 1) of J_n, bracketed on a coarse scan and refined by
/// bisection to `tol` in x.
double bessel_j_zero(int order, int k, double tol = 1e-13);

}  // namespace abcage
