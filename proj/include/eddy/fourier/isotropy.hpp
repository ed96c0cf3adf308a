#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "eddy/fourier/coupling.hpp"
#include "eddy/levy/measure.hpp"
#include "eddy/levy/theta.hpp"

namespace eddy {

// sum_k theta_k^2 (sigma_k (x) sigma_k)(x). For admissible theta this is
// 2 C_2 I independently of x.
inline Eigen::Matrix2d isotropy_sum(const NoiseCoefficients& theta, const Point& x) {
  if (!theta.is_radial()) throw std::invalid_argument("isotropy_sum: theta is not radially symmetric");
  if (std::abs(theta.l2_norm() - 1.0) > 1e-12) throw std::invalid_argument("isotropy_sum: theta must have unit l2 norm");
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  for (const auto& e : theta.support()) {
    const Vec2 s = sigma_field(e.mode)(x);
    const Eigen::Vector2d v(s[0], s[1]);
    m += e.value * e.value * v * v.transpose();
  }
  return m;
}

}  // namespace eddy
