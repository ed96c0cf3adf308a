#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "eddy/euler/dump.hpp"
#include "eddy/euler/nse.hpp"
#include "eddy/euler/solver.hpp"
#include "eddy/transport/experiment.hpp"

namespace eddy {

struct EulerPathResult {
  PathObservation observation;
  EnergyDiagnostics diagnostics;
};

inline std::vector<std::vector<double>> nse_observations(const LimitSettings& s, std::span<const double> checkpoints) {
  const SpectralField xi0 = field_from_modes(s.n_gal, s.initial);
  const Trajectory ref = NseSolver(s.n_gal, eddy_viscosity(s.nu)).run(xi0, checkpoints, s.dt);
  std::vector<std::vector<double>> out;
  for (const auto& st : ref.states) {
    std::vector<double> row;
    for (const auto& l : s.tests) row.push_back(st.basis().contains(l) ? st.coeff(l) : 0.0);
    out.push_back(std::move(row));
  }
  return out;
}

// For every n: M stochastic Euler paths on H_{n_gal} driven by theta^n, with
// D_n measured against the Navier-Stokes solution with kappa = C_2 mu_2.
inline std::vector<ConvergenceRow> euler_limit_experiment(const LimitSettings& s) {
  validate_limit_settings(s);
  if (s.n_gal < 2 * s.n_list.back()) throw std::invalid_argument("n_gal must be >= 2 * max(n_list)");
  const auto checkpoints = uniform_checkpoints(s.T, s.checkpoints);
  const auto ref = nse_observations(s, checkpoints);
  const SpectralField xi0 = field_from_modes(s.n_gal, s.initial);
  if (!s.dump_dir.empty()) std::filesystem::create_directories(s.dump_dir);
  std::vector<ConvergenceRow> rows;
  for (const int n : s.n_list) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseCoefficients theta = make_theta(n, s.a);
    const NoiseOperators ops(theta, s.n_gal);
    const CorrectorOperator B = corrector_operator(ops, s.sample_events ? restrict_below(s.nu, s.eps) : s.nu);
    PropagatorCache cache;
    const EulerSolver solver(ops, B, {}, s.nu.is_atomic() ? &cache : nullptr);
    const auto results = parallel_map<EulerPathResult>(s.M, s.workers, [&](std::size_t p) {
      return with_path(p, [&] {
        std::vector<JumpEvent> events;
        if (s.sample_events) events = sample_jumps(s.nu, theta, s.T, s.eps, s.seed, p);
        EulerPathResult r;
        const Trajectory traj = run_euler_path(solver, xi0, events, checkpoints, s.dt, &r.diagnostics);
        for (const auto& st : traj.states) {
          std::vector<double> row;
          for (const auto& l : s.tests) row.push_back(st.basis().contains(l) ? st.coeff(l) : 0.0);
          r.observation.values.push_back(std::move(row));
        }
        if (!s.dump_dir.empty())
          write_trajectory(s.dump_dir + "/euler_n" + std::to_string(n) + "_path" + std::to_string(p) + ".bin", traj, s.T);
        return r;
      });
    });
    std::vector<PathObservation> obs;
    double jump_change = 0.0, excess = -INFINITY;
    for (const auto& r : results) {
      obs.push_back(r.observation);
      jump_change = std::max(jump_change, r.diagnostics.max_jump_relative_change);
      excess = std::max(excess, r.diagnostics.max_excess);
    }
    ConvergenceRow row = reduce_paths(n, theta.linf(), obs, ref);
    row.max_jump_relative_change = jump_change;
    row.max_energy_excess = excess;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace eddy
