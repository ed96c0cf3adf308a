#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "eddy/levy/measure.hpp"
#include "eddy/levy/rng.hpp"
#include "eddy/levy/theta.hpp"

namespace eddy {

struct JumpEvent {
  double time;
  ModeIndex mode;
  double size;
};

namespace detail {

// One draw from nu restricted to |z| >= eps and normalized; `rate` is its mass.
inline double draw_jump_size(const LevyMeasure& restricted, double rate, CounterStream& rng) {
  if (restricted.is_atomic()) {
    const auto& atoms = restricted.atoms().atoms;
    const double target = rng.uniform() * rate;
    double acc = 0.0;
    for (const auto& a : atoms) {
      acc += a.mass;
      if (target < acc) return a.z;
    }
    return atoms.back().z;
  }
  const auto& p = restricted.power_law();
  // |z| has density proportional to r^{-1-alpha} on [lower, upper].
  const double lo = std::pow(p.lower, -p.alpha);
  const double hi = std::pow(p.upper, -p.alpha);
  const double r = std::pow(lo - rng.uniform() * (lo - hi), -1.0 / p.alpha);
  return rng.uniform() < 0.5 ? -r : r;
}

}  // namespace detail

// Jumps of size |z| >= eps for one mode on [0, T]: exponential gaps at rate
// lambda_eps, i.i.d. sizes. Deterministic in (seed, path, mode).
inline std::vector<JumpEvent> sample_mode_jumps(const LevyMeasure& nu, const ModeIndex& mode, double T, double eps,
                                                std::uint64_t seed, std::uint64_t path = 0) {
  std::vector<JumpEvent> out;
  const LevyMeasure restricted = restrict_above(nu, eps);
  const double rate = absolute_moment(restricted, 0.0);
  if (!(rate > 0.0)) return out;
  CounterStream rng(seed, path, mode);
  double t = rng.exponential(rate);
  while (t <= T) {
    out.push_back({t, mode, detail::draw_jump_size(restricted, rate, rng)});
    t += rng.exponential(rate);
  }
  return out;
}

// Merged, time-ordered jump events for every mode in the support of theta.
inline std::vector<JumpEvent> sample_jumps(const LevyMeasure& nu, const NoiseCoefficients& theta, double T, double eps,
                                           std::uint64_t seed, std::uint64_t path = 0) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("sample_jumps: eps must lie in (0, 1)");
  if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("sample_jumps: horizon T must be finite and >= 0");
  if (theta.size() == 0) throw std::invalid_argument("sample_jumps: empty theta support");
  std::vector<JumpEvent> events;
  for (const auto& e : theta.support()) {
    auto mode_events = sample_mode_jumps(nu, e.mode, T, eps, seed, path);
    events.insert(events.end(), mode_events.begin(), mode_events.end());
  }
  std::ranges::stable_sort(events, {}, &JumpEvent::time);
  return events;
}

}  // namespace eddy
