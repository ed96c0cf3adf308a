#pragma once

#include <json.hpp>
#include <Eigen/Dense>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "eddy/euler/experiment.hpp"
#include "eddy/experiments/config.hpp"
#include "eddy/experiments/report.hpp"
#include "eddy/fourier/isotropy.hpp"
#include "eddy/marcus/corrector.hpp"
#include "eddy/version.hpp"

namespace eddy {

enum ExitCode : int { kExitOk = 0, kExitVerdict = 1, kExitConfig = 2, kExitNumerical = 3 };

struct RunOptions {
  std::string out_dir;                // empty: config `output`, then "results"
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;  // overrides the config seed
};

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::string csv_path;
  std::vector<ConvergenceRow> rows;
};

// Max entrywise deviation of isotropy_sum from (1/2) I over random points.
inline std::vector<ConvergenceRow> identity_rows(const ExperimentConfig& c) {
  std::vector<ConvergenceRow> rows;
  for (const int n : c.limit.n_list) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseCoefficients theta = make_theta(n, c.limit.a);
    CounterStream rng(c.limit.seed, 0, static_cast<std::uint64_t>(n));
    double dev = 0.0;
    for (int i = 0; i < c.points; ++i) {
      const Point x{rng.uniform(), rng.uniform()};
      const Eigen::Matrix2d m = isotropy_sum(theta, x) - 2.0 * kIsotropyConstant * Eigen::Matrix2d::Identity();
      dev = std::max(dev, m.cwiseAbs().maxCoeff());
    }
    ConvergenceRow row;
    row.n = n;
    row.theta_linf = theta.linf();
    row.D = dev;
    row.M = static_cast<std::size_t>(c.points);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

// ||B f - kappa Delta f|| for each theta^n with B assembled on H_n, maximized
// over the test functions f = e_l.
inline std::vector<ConvergenceRow> corrector_rows(const ExperimentConfig& c) {
  std::vector<ConvergenceRow> rows;
  const double kappa = eddy_viscosity(c.limit.nu);
  for (const int n : c.limit.n_list) {
    const auto start = std::chrono::steady_clock::now();
    const NoiseCoefficients theta = make_theta(n, c.limit.a);
    int cutoff = n;
    for (const auto& l : c.limit.tests) cutoff = std::max(cutoff, static_cast<int>(std::ceil(l.norm() - 1e-12)));
    const CorrectorOperator B = corrector_operator(theta, c.limit.nu, cutoff);
    double d = 0.0;
    for (const auto& l : c.limit.tests) d = std::max(d, corrector_vs_laplacian(B, kappa, SpectralField::mode(cutoff, l)));
    ConvergenceRow row;
    row.n = n;
    row.theta_linf = theta.linf();
    row.D = d;
    row.M = 1;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<ConvergenceRow> execute(const ExperimentConfig& c, unsigned workers, const std::string& dump_dir = {}) {
  LimitSettings s = c.limit;
  s.workers = workers;
  switch (c.experiment) {
    case ExperimentKind::identity_check: return identity_rows(c);
    case ExperimentKind::corrector_check: return corrector_rows(c);
    case ExperimentKind::transport_limit: return transport_limit_experiment(s);
    case ExperimentKind::euler_limit:
      if (c.dump_trajectories) s.dump_dir = dump_dir;
      return euler_limit_experiment(s);
  }
  return {};
}

inline bool strictly_decreasing(const std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].D < rows[i - 1].D)) return false;
  return true;
}

// identity-check: every deviation within tolerance; the others: D strictly
// decreasing in n.
inline bool verdict(const ExperimentConfig& c, const std::vector<ConvergenceRow>& rows) {
  if (c.experiment == ExperimentKind::identity_check) {
    for (const auto& r : rows)
      if (!(r.D <= c.tolerance)) return false;
    return true;
  }
  return strictly_decreasing(rows);
}

inline std::string resolve_out_dir(const RunOptions& opt, const ExperimentConfig& c) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  if (const char* env = std::getenv("EDDY_OUT_DIR"); env != nullptr && *env != '\0') return env;
  if (!c.output.empty()) return c.output;
  return "results";
}

// Runs the experiment described by config_text and writes
// <out>/<experiment>.csv plus the JSON sidecar <out>/<experiment>.json.
inline RunResult run_experiment(const std::string& config_text, const std::string& source,
                                std::optional<ExperimentKind> expected, const RunOptions& opt) {
  RunResult res;
  ExperimentConfig c;
  try {
    c = parse_config(config_text, source);
  } catch (const ConfigError& e) {
    return {kExitConfig, e.what(), {}, {}};
  }
  if (expected && *expected != c.experiment)
    return {kExitConfig,
            source + ": config describes '" + experiment_name(c.experiment) + "' but the subcommand is '" +
                experiment_name(*expected) + "'",
            {},
            {}};
  if (opt.seed) c.limit.seed = *opt.seed;
  const std::string dir = resolve_out_dir(opt, c);
  const std::string stem = dir + "/" + experiment_name(c.experiment);
  const auto started = std::chrono::system_clock::now();
  try {
    std::filesystem::create_directories(dir);
    res.rows = execute(c, opt.workers, stem + "_trajectories");
  } catch (const NumericalFailure& e) {
    return {kExitNumerical, std::string("numerical failure: ") + e.what(), {}, {}};
  } catch (const std::invalid_argument& e) {
    return {kExitConfig, source + ": " + e.what(), {}, {}};
  }
  const auto finished = std::chrono::system_clock::now();
  const std::string csv = format_csv(res.rows);
  res.csv_path = stem + ".csv";
  std::ofstream(res.csv_path, std::ios::binary) << csv;
  const bool ok = verdict(c, res.rows);
  nlohmann::ordered_json meta;
  meta["config_sha256"] = sha256_hex(config_text);
  meta["seed"] = c.limit.seed;
  meta["version"] = kVersion;
  meta["started_at"] = utc_timestamp(started);
  meta["finished_at"] = utc_timestamp(finished);
  meta["experiment"] = experiment_name(c.experiment);
  meta["verdict"] = c.experiment == ExperimentKind::identity_check ? (ok ? "pass" : "fail")
                                                                    : (ok ? "monotone" : "non-monotone");
  meta["config"] = config_text;
  std::ofstream(stem + ".json", std::ios::binary) << meta.dump(2) << "\n";
  res.exit_code = ok ? kExitOk : kExitVerdict;
  res.message = std::string(experiment_name(c.experiment)) + ": " + meta["verdict"].get<std::string>() + ", wrote " +
                res.csv_path;
  return res;
}

inline std::string sidecar_path(const std::string& report) {
  std::filesystem::path p(report);
  p.replace_extension(".json");
  return p.string();
}

// Re-runs a report from the config and seed embedded in its sidecar and
// compares the CSV byte-wise, ignoring only the wallclock column.
inline RunResult replay(const std::string& report, unsigned workers) {
  const std::string side = sidecar_path(report);
  if (!std::filesystem::exists(side)) return {kExitConfig, "missing sidecar " + side, {}, {}};
  if (!std::filesystem::exists(report)) return {kExitConfig, "missing report " + report, {}, {}};
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(side));
  } catch (const std::exception& e) {
    return {kExitConfig, side + ": unreadable sidecar: " + e.what(), {}, {}};
  }
  if (!meta.contains("config") || !meta.contains("seed") || !meta.contains("config_sha256"))
    return {kExitConfig, side + ": sidecar lacks config, seed or config_sha256", {}, {}};
  const std::string text = meta["config"].get<std::string>();
  if (sha256_hex(text) != meta["config_sha256"].get<std::string>())
    return {kExitConfig, side + ": embedded config does not match config_sha256", {}, {}};
  ExperimentConfig c;
  try {
    c = parse_config(text, side + "#config");
  } catch (const ConfigError& e) {
    return {kExitConfig, e.what(), {}, {}};
  }
  c.limit.seed = meta["seed"].get<std::uint64_t>();
  RunResult res;
  try {
    res.rows = execute(c, workers);
  } catch (const NumericalFailure& e) {
    return {kExitNumerical, std::string("numerical failure: ") + e.what(), {}, {}};
  }
  const auto cmp = compare_csv(read_file(report), format_csv(res.rows));
  res.csv_path = report;
  if (cmp.match) {
    res.exit_code = kExitOk;
    res.message = "match: " + report;
  } else {
    res.exit_code = kExitVerdict;
    res.message = "mismatch at " + (cmp.row == 0 ? std::string("header") : "row " + std::to_string(cmp.row)) + ": " +
                  cmp.detail;
  }
  return res;
}

}  // namespace eddy
