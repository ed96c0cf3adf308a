#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eddy/euler/drift.hpp"
#include "eddy/levy/sampler.hpp"
#include "eddy/marcus/corrector.hpp"
#include "eddy/marcus/jump_exponential.hpp"
#include "eddy/transport/galerkin.hpp"
#include "eddy/util/errors.hpp"

namespace eddy {

class EulerState {
 public:
  EulerState(double t, SpectralField vorticity) : t_(t), xi_(std::move(vorticity)) {}

  double time() const { return t_; }
  const SpectralField& vorticity() const { return xi_; }

  // Velocity from the current vorticity, recomputed after every mutation.
  const VelocityField& velocity() const {
    if (!u_) u_ = biot_savart(xi_);
    return *u_;
  }

  void set(double t, SpectralField vorticity) {
    t_ = t;
    xi_ = std::move(vorticity);
    u_.reset();
  }

 private:
  double t_;
  SpectralField xi_;
  mutable std::optional<VelocityField> u_;
};

struct EulerStepOptions {
  double cfl = 0.5;           // dt * max|u| * 2 pi n <= cfl
  double min_step = 1e-10;    // halving below this is a numerical failure
  bool nonlinear = true;      // false: only the corrector drift
};

// Deterministic part of the Galerkin Euler system on H_n:
// d xi/dt = -Pi_n(u . grad xi) + B xi, by classical RK4.
class EulerStepper {
 public:
  explicit EulerStepper(const CorrectorOperator& B, EulerStepOptions options = {})
      : B_(&B), drift_(B.cutoff()), options_(options), b_zero_(B.matrix().isZero(0.0)) {}

  int cutoff() const { return B_->cutoff(); }

  SpectralField rhs(const SpectralField& xi, double* max_speed = nullptr) const {
    SpectralField out(cutoff());
    if (options_.nonlinear) {
      auto ev = drift_.evaluate(xi);
      out -= ev.drift;
      if (max_speed != nullptr) *max_speed = ev.max_speed;
    } else if (max_speed != nullptr) {
      *max_speed = 0.0;
    }
    if (!b_zero_) out.vec() += B_->matrix() * xi.vec();
    return out;
  }

  // One step of size h. Returns false, leaving the state alone, when the step
  // violates the CFL limit.
  bool try_step(EulerState& state, double h) const {
    if (h <= 0.0) return true;
    const SpectralField& x = state.vorticity();
    double speed = 0.0;
    const SpectralField k1 = rhs(x, &speed);
    if (h * speed * kTwoPi * cutoff() > options_.cfl) return false;
    const SpectralField k2 = rhs(x + (0.5 * h) * k1);
    const SpectralField k3 = rhs(x + (0.5 * h) * k2);
    const SpectralField k4 = rhs(x + h * k3);
    SpectralField next = x;
    next.vec() += (h / 6.0) * (k1.vec() + 2.0 * k2.vec() + 2.0 * k3.vec() + k4.vec());
    if (!next.vec().allFinite()) throw NumericalFailure("non-finite vorticity", 0, state.time() + h);
    state.set(state.time() + h, std::move(next));
    return true;
  }

  // Advances by exactly dt in steps of at most max_step, halving on CFL rejection.
  void advance(EulerState& state, double dt, double max_step) const {
    const double target = state.time() + dt;
    double h = max_step;
    while (target - state.time() > 0.0) {
      const double remaining = target - state.time();
      const double step = std::min(h, remaining);
      if (try_step(state, step)) {
        if (step == remaining) state.set(target, state.vorticity());
        h = max_step;
      } else {
        h = 0.5 * step;
        if (h < options_.min_step) throw NumericalFailure("CFL step size collapse", 0, state.time());
      }
    }
  }

 private:
  const CorrectorOperator* B_;
  NonlinearDrift drift_;
  EulerStepOptions options_;
  bool b_zero_;
};

// xi <- e^{-z theta_k A_k^n} xi for the event (t, k, z).
inline void euler_apply_jump(EulerState& state, const NoiseOperators& ops, const JumpEvent& event,
                             PropagatorCache* cache = nullptr) {
  const std::size_t s = ops.slot(event.mode);
  const double w = event.size * ops.theta(s);
  if (w == 0.0) return;
  SpectralField next = cache != nullptr ? cache->get(s, ops.op(s), w).apply(state.vorticity())
                                        : jump_exponential(ops.op(s), w, state.vorticity());
  state.set(state.time(), std::move(next));
}

// Galerkin stochastic Euler on H_n: EulerStepper between events and the
// exponential jump map at each event.
class EulerSolver {
 public:
  EulerSolver(const NoiseOperators& ops, const CorrectorOperator& B, EulerStepOptions options = {},
              PropagatorCache* cache = nullptr)
      : ops_(&ops), stepper_(B, options), cache_(cache) {
    if (B.cutoff() != ops.cutoff()) throw std::invalid_argument("EulerSolver: corrector cutoff mismatch");
  }

  int cutoff() const { return ops_->cutoff(); }
  const EulerStepper& stepper() const { return stepper_; }
  void advance(EulerState& state, double dt, double max_step) const { stepper_.advance(state, dt, max_step); }
  void jump(EulerState& state, const JumpEvent& ev) const { euler_apply_jump(state, *ops_, ev, cache_); }

 private:
  const NoiseOperators* ops_;
  EulerStepper stepper_;
  PropagatorCache* cache_;
};

// Norm diagnostics collected along one path.
struct EnergyDiagnostics {
  double max_jump_relative_change = 0.0;  // max | ||xi+|| - ||xi-|| | / ||xi-||
  double max_excess = -std::numeric_limits<double>::infinity();  // max of ||xi(t)|| - ||xi0|| (1 + 1e-9 t)
  std::size_t jumps = 0;
  std::size_t stops = 0;
};

// Steps exactly to every event time and checkpoint; never jumps mid-step.
inline Trajectory run_euler_path(const EulerSolver& solver, const SpectralField& xi0, std::span<const JumpEvent> events,
                                 std::span<const double> checkpoints, double dt, EnergyDiagnostics* diag = nullptr) {
  require_sorted(events);
  if (!(dt > 0.0)) throw std::invalid_argument("euler: dt must be positive");
  EulerState state(0.0, project(xi0, solver.cutoff()));
  const double norm0 = state.vorticity().l2_norm();
  auto observe = [&] {
    if (diag == nullptr) return;
    diag->max_excess = std::max(diag->max_excess, state.vorticity().l2_norm() - norm0 * (1.0 + 1e-9 * state.time()));
    ++diag->stops;
  };
  observe();
  Trajectory out;
  std::size_t next = 0;
  for (const double tc : checkpoints) {
    if (tc < state.time()) throw std::invalid_argument("euler: checkpoints must be sorted");
    for (; next < events.size() && events[next].time <= tc; ++next) {
      solver.advance(state, events[next].time - state.time(), dt);
      observe();
      const double before = state.vorticity().l2_norm();
      solver.jump(state, events[next]);
      if (diag != nullptr && before > 0.0) {
        diag->max_jump_relative_change =
            std::max(diag->max_jump_relative_change, std::abs(state.vorticity().l2_norm() - before) / before);
        ++diag->jumps;
      }
      observe();
    }
    solver.advance(state, tc - state.time(), dt);
    observe();
    out.times.push_back(state.time());
    out.states.push_back(state.vorticity());
  }
  return out;
}

// Advances by dt with RK4, split into halved substeps when dt breaks the CFL limit.
inline EulerState euler_step_between_jumps(const EulerState& state, const CorrectorOperator& B, double dt,
                                           EulerStepOptions options = {}) {
  EulerState out = state;
  EulerStepper(B, options).advance(out, dt, dt);
  return out;
}

}  // namespace eddy
