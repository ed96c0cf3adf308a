#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "eddy/levy/sampler.hpp"
#include "eddy/marcus/corrector.hpp"
#include "eddy/marcus/jump_exponential.hpp"
#include "eddy/transport/characteristics.hpp"

namespace eddy {

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
};

enum class LinearIntegrator { exact, rk4 };

// d xi / dt = B xi between events. The exact variant diagonalizes the
// symmetric part of B once; the rk4 variant takes classical steps.
class LinearDrift {
 public:
  LinearDrift(const CorrectorOperator& B, LinearIntegrator method) : B_(&B), method_(method) {
    zero_ = B.matrix().isZero(0.0);
    if (!zero_ && method == LinearIntegrator::exact) {
      const Eigen::MatrixXd s = 0.5 * (B.matrix() + B.matrix().transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
      vectors_ = eig.eigenvectors();
      values_ = eig.eigenvalues();
    }
    if (!zero_) rho_ = B.spectral_radius();
  }

  bool is_zero() const { return zero_; }

  // Advance by dt; the rk4 variant subdivides so that each step is <= max_step
  // and <= 0.1 / ||B||.
  void advance(SpectralField& xi, double dt, double max_step) const {
    if (zero_ || dt <= 0.0) return;
    if (method_ == LinearIntegrator::exact) {
      const Eigen::VectorXd c = vectors_.transpose() * xi.vec();
      xi.vec() = vectors_ * (values_.array() * dt).exp().matrix().cwiseProduct(c);
      return;
    }
    const double h_max = std::min(max_step, rho_ > 0.0 ? 0.1 / rho_ : max_step);
    const int steps = std::max(1, static_cast<int>(std::ceil(dt / h_max)));
    const double h = dt / steps;
    const Eigen::MatrixXd& M = B_->matrix();
    Eigen::VectorXd x = xi.vec();
    for (int s = 0; s < steps; ++s) {
      const Eigen::VectorXd k1 = M * x;
      const Eigen::VectorXd k2 = M * (x + 0.5 * h * k1);
      const Eigen::VectorXd k3 = M * (x + 0.5 * h * k2);
      const Eigen::VectorXd k4 = M * (x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    xi.vec() = x;
  }

 private:
  const CorrectorOperator* B_;
  LinearIntegrator method_;
  bool zero_ = true;
  double rho_ = 0.0;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd values_;
};

// Galerkin transport on H_n: between events d xi/dt = B xi, at an event
// (t, k, z) xi <- e^{z theta_k A_k^n} xi. B should be the corrector of the
// part of nu that is not realized as events (all of nu when no events are
// sampled). States are recorded at the requested checkpoints.
class TransportGalerkin {
 public:
  TransportGalerkin(const NoiseOperators& ops, const CorrectorOperator& B, LinearIntegrator method = LinearIntegrator::exact,
                    PropagatorCache* cache = nullptr)
      : ops_(&ops), drift_(B, method), cache_(cache) {
    if (B.cutoff() != ops.cutoff()) throw std::invalid_argument("TransportGalerkin: corrector cutoff mismatch");
  }

  void jump(SpectralField& xi, const JumpEvent& ev) const {
    const std::size_t s = ops_->slot(ev.mode);
    const double w = -ev.size * ops_->theta(s);
    if (w == 0.0) return;
    if (cache_ != nullptr)
      xi = cache_->get(s, ops_->op(s), w).apply(xi);
    else
      xi = jump_exponential(ops_->op(s), w, xi);
  }

  Trajectory run(const SpectralField& xi0, std::span<const JumpEvent> events, std::span<const double> checkpoints,
                 double dt) const {
    require_sorted(events);
    if (!(dt > 0.0)) throw std::invalid_argument("transport_galerkin: dt must be positive");
    SpectralField xi = project(xi0, ops_->cutoff());
    Trajectory out;
    double t = 0.0;
    std::size_t next = 0;
    for (const double tc : checkpoints) {
      if (tc < t) throw std::invalid_argument("transport_galerkin: checkpoints must be sorted");
      for (; next < events.size() && events[next].time <= tc; ++next) {
        drift_.advance(xi, events[next].time - t, dt);
        t = events[next].time;
        jump(xi, events[next]);
      }
      drift_.advance(xi, tc - t, dt);
      t = tc;
      out.times.push_back(t);
      out.states.push_back(xi);
    }
    return out;
  }

 private:
  const NoiseOperators* ops_;
  LinearDrift drift_;
  PropagatorCache* cache_;
};

// Trajectory on [0, T] recorded at every multiple of dt and at T.
inline Trajectory transport_galerkin(const SpectralField& xi0, std::span<const JumpEvent> events, const NoiseOperators& ops,
                                     const CorrectorOperator& B, double T, double dt) {
  if (!(T >= 0.0)) throw std::invalid_argument("transport_galerkin: T must be >= 0");
  if (!(dt > 0.0)) throw std::invalid_argument("transport_galerkin: dt must be positive");
  std::vector<double> grid{0.0};
  const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
  for (int i = 1; i <= steps; ++i) grid.push_back(std::min(T, i * dt));
  return TransportGalerkin(ops, B).run(xi0, events, grid, dt);
}

}  // namespace eddy
