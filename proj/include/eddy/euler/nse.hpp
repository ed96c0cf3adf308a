#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "eddy/euler/drift.hpp"
#include "eddy/transport/galerkin.hpp"
#include "eddy/util/errors.hpp"

namespace eddy {

// d xi/dt = kappa Delta xi - Pi_n(u . grad xi) on H_n. Diffusion is integrated
// exactly through the factor exp(-kappa 4 pi^2 |l|^2 t); the nonlinearity by
// classical RK4 in the transformed variable.
class NseSolver {
 public:
  NseSolver(int cutoff, double kappa, double cfl = 0.5) : drift_(cutoff), kappa_(kappa), cfl_(cfl) {
    if (!(kappa > 0.0)) throw std::invalid_argument("nse_reference: kappa must be positive");
    const ModeSet& basis = ModeSet::of(cutoff);
    rate_.resize(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) rate_[static_cast<Eigen::Index>(i)] = kappa * kTwoPi * kTwoPi * basis[i].norm_sq();
  }

  int cutoff() const { return drift_.cutoff(); }

  bool try_step(SpectralField& xi, double h) const {
    const Eigen::VectorXd e_half = (-0.5 * h * rate_).array().exp();
    const Eigen::VectorXd e_full = (-h * rate_).array().exp();
    auto N = [&](const Eigen::VectorXd& v, double* speed) {
      auto ev = drift_.evaluate(SpectralField(cutoff(), v));
      if (speed != nullptr) *speed = ev.max_speed;
      return Eigen::VectorXd(-ev.drift.vec());
    };
    const Eigen::VectorXd& x = xi.vec();
    double speed = 0.0;
    const Eigen::VectorXd k1 = N(x, &speed);
    if (h * speed * kTwoPi * cutoff() > cfl_) return false;
    const Eigen::VectorXd k2 = N(e_half.cwiseProduct(x + 0.5 * h * k1), nullptr);
    const Eigen::VectorXd k3 = N(e_half.cwiseProduct(x) + 0.5 * h * k2, nullptr);
    const Eigen::VectorXd k4 = N(e_full.cwiseProduct(x) + h * e_half.cwiseProduct(k3), nullptr);
    Eigen::VectorXd next = e_full.cwiseProduct(x) +
                           (h / 6.0) * (e_full.cwiseProduct(k1) + 2.0 * e_half.cwiseProduct(k2 + k3) + k4);
    if (!next.allFinite()) throw NumericalFailure("non-finite vorticity in the Navier-Stokes reference", 0, h);
    xi.vec() = std::move(next);
    return true;
  }

  Trajectory run(const SpectralField& xi0, std::span<const double> checkpoints, double dt) const {
    if (!(dt > 0.0)) throw std::invalid_argument("nse_reference: dt must be positive");
    SpectralField xi = project(xi0, cutoff());
    Trajectory out;
    double t = 0.0;
    for (const double tc : checkpoints) {
      if (tc < t) throw std::invalid_argument("nse_reference: checkpoints must be sorted");
      double h = dt;
      while (tc - t > 0.0) {
        const double step = std::min(h, tc - t);
        if (try_step(xi, step)) {
          t = step == tc - t ? tc : t + step;
          h = dt;
        } else {
          h = 0.5 * step;
          if (h < 1e-10) throw NumericalFailure("CFL step size collapse in the Navier-Stokes reference", 0, t);
        }
      }
      out.times.push_back(t);
      out.states.push_back(xi);
    }
    return out;
  }

 private:
  NonlinearDrift drift_;
  double kappa_;
  double cfl_;
  Eigen::VectorXd rate_;
};

// Trajectory on [0, T] recorded at every multiple of dt and at T.
inline Trajectory nse_reference(const SpectralField& xi0, double kappa, double T, double dt) {
  if (!(T >= 0.0)) throw std::invalid_argument("nse_reference: T must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("nse_reference: dt must be positive");
  std::vector<double> grid{0.0};
  const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  for (int i = 1; i <= steps; ++i) grid.push_back(std::min(T, i * dt));
  return NseSolver(xi0.cutoff(), kappa).run(xi0, grid, dt);
}

}  // namespace eddy
