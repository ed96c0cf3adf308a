#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "eddy/fourier/biot_savart.hpp"
#include "eddy/fourier/grid.hpp"

namespace eddy {

struct DriftEvaluation {
  SpectralField drift;  // Pi_n(u . grad xi)
  double max_speed;     // max |u| over the grid nodes
};

// Pi_n(u . grad xi) with u = biot_savart(xi), by a pseudo-spectral product on a
// grid of size > 3n. The product of two fields in H_n has wavenumbers up to
// 2n per axis, and on such a grid none of them aliases onto H_n, so the
// projection is exact.
class NonlinearDrift {
 public:
  explicit NonlinearDrift(int cutoff) : cutoff_(cutoff), grid_(&PeriodicGrid::of(grid_size_above(3 * cutoff))) {}

  int cutoff() const { return cutoff_; }
  int grid_size() const { return grid_->size(); }

  DriftEvaluation evaluate(const SpectralField& xi) const {
    const VelocityField u = biot_savart(xi);
    const auto u1 = grid_->synthesize(u.u1);
    const auto u2 = grid_->synthesize(u.u2);
    const auto d1 = grid_->synthesize(partial(xi, 0));
    const auto d2 = grid_->synthesize(partial(xi, 1));
    std::vector<double> prod(grid_->points());
    double speed_sq = 0.0;
    for (std::size_t j = 0; j < prod.size(); ++j) {
      prod[j] = u1[j] * d1[j] + u2[j] * d2[j];
      speed_sq = std::max(speed_sq, u1[j] * u1[j] + u2[j] * u2[j]);
    }
    return {grid_->analyze(prod, cutoff_), std::sqrt(speed_sq)};
  }

  SpectralField operator()(const SpectralField& xi) const { return evaluate(xi).drift; }

 private:
  int cutoff_;
  const PeriodicGrid* grid_;
};

inline SpectralField nonlinear_drift(const SpectralField& xi) { return NonlinearDrift(xi.cutoff())(xi); }

}  // namespace eddy
