#pragma once

#include <cmath>
#include <vector>

namespace csched {

// A complex power value: active component (re, watts) and reactive component
// (im, vars). The magnitude is the apparent power.
struct ComplexPower {
  double re = 0.0;
  double im = 0.0;

  double magnitude() const { return std::hypot(re, im); }

  // Angle with the positive real axis in [-pi, pi]; the zero vector maps to 0.
  double argument() const { return (re == 0.0 && im == 0.0) ? 0.0 : std::atan2(im, re); }

  ComplexPower& operator+=(const ComplexPower& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  friend ComplexPower operator+(ComplexPower a, const ComplexPower& b) { return a += b; }
  friend ComplexPower operator*(double k, const ComplexPower& v) { return {k * v.re, k * v.im}; }
  friend bool operator==(const ComplexPower&, const ComplexPower&) = default;
};

// v rotated counterclockwise by rho radians.
ComplexPower rotated(const ComplexPower& v, double rho);

// Angle between two nonzero vectors, in [0, pi].
double angle_between(const ComplexPower& a, const ComplexPower& b);

struct ConeBoundCheck {
  double lhs = 0.0;                // sum of magnitudes over magnitude of the sum
  double rhs = 0.0;                // sec(theta / 2)
  double max_pairwise_angle = 0.0; // theta
  bool holds = false;
};

// Checks sum(|d_i|) / |sum d_i| <= sec(theta/2) where theta is the maximum
// pairwise angle of the nonzero inputs. Requires theta <= pi/2 and at least
// one nonzero vector; zero vectors are dropped before computing theta.
ConeBoundCheck angle_sum_bound_check(const std::vector<ComplexPower>& vectors);

}  // namespace csched
