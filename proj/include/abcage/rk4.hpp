#pragma once

#include <Eigen/Core>

namespace abcage {

/// Classical fixed-step fourth-order Runge-Kutta for dy/dt = f(t, y).
/// `rhs(t, y, dy)` must write the derivative into dy. Scratch storage is kept
/// between steps so the hot loop does not allocate.
template <class State>
class Rk4 {
 public:
  template <class Rhs>
  void step(State& y, double t, double h, Rhs&& rhs) {
    if (k1_.size() != y.size()) {
      k1_ = y;
      k2_ = y;
      k3_ = y;
      k4_ = y;
      tmp_ = y;
    }
    const double half = 0.5 * h;
    rhs(t, y, k1_);
    tmp_ = y + half * k1_;
    rhs(t + half, tmp_, k2_);
    tmp_ = y + half * k2_;
    rhs(t + half, tmp_, k3_);
    tmp_ = y + h * k3_;
    rhs(t + h, tmp_, k4_);
    y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  State k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace abcage
