#include "csched/power.hpp"

#include <algorithm>
#include <cmath>

#include "csched/errors.hpp"

namespace csched {

ComplexPower rotated(const ComplexPower& v, double rho) {
  const double c = std::cos(rho);
  const double s = std::sin(rho);
  return {v.re * c - v.im * s, v.re * s + v.im * c};
}

double angle_between(const ComplexPower& a, const ComplexPower& b) {
  const double na = a.magnitude();
  const double nb = b.magnitude();
  if (na == 0.0 || nb == 0.0) throw precondition_error("angle_between: zero vector");
  const double cosine = std::clamp((a.re * b.re + a.im * b.im) / (na * nb), -1.0, 1.0);
  return std::acos(cosine);
}

ConeBoundCheck angle_sum_bound_check(const std::vector<ComplexPower>& vectors) {
  std::vector<ComplexPower> nonzero;
  for (const auto& v : vectors) {
    if (v.magnitude() > 0.0) nonzero.push_back(v);
  }
  if (nonzero.empty()) throw precondition_error("angle_sum_bound_check: all vectors are zero");

  double theta = 0.0;
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    for (std::size_t j = i + 1; j < nonzero.size(); ++j) {
      theta = std::max(theta, angle_between(nonzero[i], nonzero[j]));
    }
  }
  constexpr double kHalfPi = 1.5707963267948966;
  if (theta > kHalfPi + 1e-12) {
    throw precondition_error("angle_sum_bound_check: maximum pairwise angle exceeds pi/2");
  }

  double magnitude_sum = 0.0;
  ComplexPower total;
  for (const auto& v : nonzero) {
    magnitude_sum += v.magnitude();
    total += v;
  }

  ConeBoundCheck out;
  out.max_pairwise_angle = theta;
  out.lhs = magnitude_sum / total.magnitude();
  out.rhs = 1.0 / std::cos(theta / 2.0);
  out.holds = out.lhs <= out.rhs + 1e-9;
  return out;
}

}  // namespace csched
