#pragma once

#include <cmath>

#include "eddy/fourier/coupling.hpp"

namespace eddy {

enum class FlowSign { transport, euler };

// Time-one map of the jump vector field w sigma_k. Since sigma_k is constant
// along its own integral curves, the flow is affine in e_k:
// transport x -> x - w sigma_k(x), euler x -> x + w sigma_k(x), both mod 1.
class JumpFlowMap {
 public:
  JumpFlowMap(ModeIndex k, double w, FlowSign sign) : sigma_(sigma_field(k)), w_(w), sign_(sign) {}

  const ModeIndex& mode() const { return sigma_.k; }
  double amplitude() const { return w_; }
  FlowSign sign() const { return sign_; }

  Point operator()(const Point& x) const {
    const double s = (sign_ == FlowSign::transport ? -w_ : w_) * eval_basis(sigma_.k, x);
    return {wrap(x[0] + s * sigma_.a[0]), wrap(x[1] + s * sigma_.a[1])};
  }

  static double wrap(double v) {
    v -= std::floor(v);
    return v >= 1.0 ? 0.0 : v;
  }

 private:
  SigmaField sigma_;
  double w_;
  FlowSign sign_;
};

inline Point apply_jump_flow(const JumpFlowMap& map, const Point& x) { return map(x); }

}  // namespace eddy
