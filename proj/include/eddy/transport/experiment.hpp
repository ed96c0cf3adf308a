#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <stdexcept>
#include <vector>

#include "eddy/levy/measure.hpp"
#include "eddy/levy/sampler.hpp"
#include "eddy/levy/theta.hpp"
#include "eddy/transport/characteristics.hpp"
#include "eddy/transport/galerkin.hpp"
#include "eddy/transport/heat.hpp"
#include "eddy/util/errors.hpp"
#include "eddy/util/parallel.hpp"

namespace eddy {

enum class TransportSolver { characteristics, galerkin };

// Settings shared by the transport and Euler scaling-limit runs.
struct LimitSettings {
  LevyMeasure nu = LevyMeasure::two_atom(0.5);
  double a = 0.1;
  std::vector<int> n_list;
  std::vector<ModeAmplitude> initial;
  std::vector<ModeIndex> tests;
  double T = 0.5;
  double dt = 0.01;
  double eps = 0.1;
  std::size_t M = 64;
  std::uint64_t seed = 1;
  int n_gal = 16;
  int grid = 96;
  int checkpoints = 8;
  TransportSolver solver = TransportSolver::characteristics;
  bool sample_events = true;
  unsigned workers = 1;
  std::string dump_dir;  // Euler runs: per-path trajectory dumps when non-empty
};

struct ConvergenceRow {
  int n = 0;
  double theta_linf = 0.0;
  double D = 0.0;
  double stderr_D = 0.0;
  std::size_t M = 0;
  double seconds = 0.0;
  // Sample mean and variance of <xi^n(T), first test function>.
  double final_mean = 0.0;
  double final_variance = 0.0;
  // Euler runs only: worst jump norm change and worst energy excess over paths.
  double max_jump_relative_change = 0.0;
  double max_energy_excess = 0.0;
};

// Per-path observations: values[c][j] = <xi(t_c), phi_j>.
struct PathObservation {
  std::vector<std::vector<double>> values;
};

inline std::vector<double> uniform_checkpoints(double T, int count) {
  if (count < 1) throw std::invalid_argument("checkpoints: count must be >= 1");
  std::vector<double> t;
  for (int i = 1; i <= count; ++i) t.push_back(T * i / count);
  return t;
}

inline int max_mode_norm(std::span<const ModeAmplitude> modes) {
  int c = 1;
  for (const auto& m : modes) c = std::max(c, static_cast<int>(std::ceil(m.mode.norm() - 1e-12)));
  return c;
}

// Reduces path observations against reference values ref[c][j] into a row.
inline ConvergenceRow reduce_paths(int n, double theta_linf, const std::vector<PathObservation>& paths,
                                   const std::vector<std::vector<double>>& ref) {
  ConvergenceRow row;
  row.n = n;
  row.theta_linf = theta_linf;
  row.M = paths.size();
  std::vector<double> err;
  std::vector<double> last;
  for (const auto& p : paths) {
    double e = 0.0;
    for (std::size_t c = 0; c < ref.size(); ++c)
      for (std::size_t j = 0; j < ref[c].size(); ++j) e = std::max(e, std::abs(p.values[c][j] - ref[c][j]));
    err.push_back(e);
    last.push_back(p.values.back().front());
  }
  auto mean_var = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0};
  };
  const auto [dm, dv] = mean_var(err);
  row.D = dm;
  row.stderr_D = std::sqrt(dv / static_cast<double>(err.size()));
  const auto [lm, lv] = mean_var(last);
  row.final_mean = lm;
  row.final_variance = lv;
  return row;
}

// Rethrows numerical failures with the path index attached.
template <class Fn>
auto with_path(std::size_t path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NumericalFailure& e) {
    throw NumericalFailure(e.reason(), path, e.time());
  }
}

inline std::vector<std::vector<double>> heat_observations(const LimitSettings& s, std::span<const double> checkpoints) {
  const int c = std::max(max_mode_norm(s.initial), 1);
  const SpectralField xi0 = field_from_modes(c, s.initial);
  const double kappa = eddy_viscosity(s.nu);
  std::vector<std::vector<double>> ref;
  for (const double t : checkpoints) {
    const SpectralField h = heat_reference(xi0, kappa, t);
    std::vector<double> row;
    for (const auto& l : s.tests) row.push_back(h.basis().contains(l) ? h.coeff(l) : 0.0);
    ref.push_back(std::move(row));
  }
  return ref;
}

// One transport path for theta^n; deterministic in (seed, path).
inline PathObservation transport_path(const LimitSettings& s, const NoiseCoefficients& theta, const NoiseOperators* ops,
                                      const CorrectorOperator* B, PropagatorCache* cache, std::span<const double> checkpoints,
                                      std::size_t path) {
  std::vector<JumpEvent> events;
  if (s.sample_events) events = sample_jumps(s.nu, theta, s.T, s.eps, s.seed, path);
  PathObservation obs;
  if (s.solver == TransportSolver::characteristics) {
    const int c = max_mode_norm(s.initial);
    const SpectralField xi0 = field_from_modes(c, s.initial);
    std::vector<std::function<double(const Point&)>> tests;
    for (const auto& l : s.tests) tests.emplace_back([l](const Point& x) { return eval_basis(l, x); });
    obs.values = transport_characteristics([&](const Point& y) { return xi0.evaluate(y); }, events, theta,
                                           std::span<const std::function<double(const Point&)>>(tests), checkpoints,
                                           s.grid);
  } else {
    const SpectralField xi0 = field_from_modes(ops->cutoff(), s.initial);
    const Trajectory traj = TransportGalerkin(*ops, *B, LinearIntegrator::exact, cache).run(xi0, events, checkpoints, s.dt);
    for (const auto& st : traj.states) {
      std::vector<double> row;
      for (const auto& l : s.tests) row.push_back(st.basis().contains(l) ? st.coeff(l) : 0.0);
      obs.values.push_back(std::move(row));
    }
  }
  for (const auto& row : obs.values)
    for (double v : row)
      if (!std::isfinite(v)) throw NumericalFailure("non-finite observation", path, s.T);
  return obs;
}

inline void validate_limit_settings(const LimitSettings& s) {
  if (s.n_list.empty()) throw std::invalid_argument("n_list must not be empty");
  for (std::size_t i = 0; i < s.n_list.size(); ++i) {
    if (s.n_list[i] < 1) throw std::invalid_argument("n_list entries must be >= 1");
    if (i > 0 && s.n_list[i] <= s.n_list[i - 1]) throw std::invalid_argument("n_list must be strictly increasing");
  }
  if (s.initial.empty()) throw std::invalid_argument("initial condition must have at least one mode");
  if (s.tests.empty()) throw std::invalid_argument("test_functions must not be empty");
  if (!(s.T > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(s.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(s.eps > 0.0 && s.eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (s.M < 1) throw std::invalid_argument("M must be >= 1");
}

// For every n: M paths driven by theta^n, D_n = mean over paths of the max over
// tests and checkpoints of |<xi^n(t), phi> - <heat(t), phi>|.
inline std::vector<ConvergenceRow> transport_limit_experiment(const LimitSettings& s) {
  validate_limit_settings(s);
  if (s.solver == TransportSolver::characteristics && !s.sample_events)
    throw std::invalid_argument("the characteristics solver needs sampled events (it has no drift term)");
  const auto checkpoints = uniform_checkpoints(s.T, s.checkpoints);
  const auto ref = heat_observations(s, checkpoints);
  std::vector<ConvergenceRow> rows;
  for (const int n : s.n_list) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseCoefficients theta = make_theta(n, s.a);
    std::optional<NoiseOperators> ops;
    std::optional<CorrectorOperator> B;
    PropagatorCache cache;
    if (s.solver == TransportSolver::galerkin) {
      ops.emplace(theta, s.n_gal);
      B.emplace(corrector_operator(*ops, s.sample_events ? restrict_below(s.nu, s.eps) : s.nu));
    }
    PropagatorCache* cache_ptr = s.nu.is_atomic() ? &cache : nullptr;
    const auto paths = parallel_map<PathObservation>(s.M, s.workers, [&](std::size_t p) {
      return with_path(p, [&] {
        return transport_path(s, theta, ops ? &*ops : nullptr, B ? &*B : nullptr, cache_ptr, checkpoints, p);
      });
    });
    ConvergenceRow row = reduce_paths(n, theta.linf(), paths, ref);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eddy
