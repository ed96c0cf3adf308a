// eddy: command-line front end for the identity checks and the scaling-limit
// experiments. See README.md for the config schema and output layout.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "eddy/experiments/runner.hpp"
#include "eddy/version.hpp"

namespace {

unsigned default_workers() {
  if (const char* env = std::getenv("EDDY_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    std::cerr << "ignoring invalid EDDY_WORKERS='" << env << "'\n";
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral simulator for transport and 2D Euler equations driven by Marcus jump noise"};
  app.set_version_flag("--version", std::string(eddy::kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, report;
  unsigned workers = default_workers();
  std::uint64_t seed = 0;

  for (auto kind : {eddy::ExperimentKind::identity_check, eddy::ExperimentKind::corrector_check,
                    eddy::ExperimentKind::transport_limit, eddy::ExperimentKind::euler_limit}) {
    auto* sub = app.add_subcommand(eddy::experiment_name(kind), std::string("run the ") + eddy::experiment_name(kind) + " experiment");
    sub->add_option("--config", config_path, "experiment config (YAML)")->required();
    sub->add_option("--out", out_dir, "output directory (default: $EDDY_OUT_DIR, config 'output', ./results)");
    sub->add_option("--workers", workers, "worker threads (default: $EDDY_WORKERS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "override the config seed");
  }
  auto* rep = app.add_subcommand("replay", "re-run a report from its sidecar and compare the CSV");
  rep->add_option("report", report, "path to the report CSV")->required();
  rep->add_option("--workers", workers, "worker threads (default: $EDDY_WORKERS or 1)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : eddy::kExitConfig;
  }

  eddy::RunResult result;
  if (rep->parsed()) {
    result = eddy::replay(report, workers);
  } else {
    auto* sub = app.get_subcommands().front();
    const auto kind = eddy::parse_experiment_name(sub->get_name());
    eddy::RunOptions opt;
    opt.out_dir = out_dir;
    opt.workers = workers;
    if (sub->count("--seed") > 0) opt.seed = seed;
    std::string text;
    try {
      text = eddy::read_file(config_path);
    } catch (const eddy::ConfigError& e) {
      std::cerr << e.what() << "\n";
      return eddy::kExitConfig;
    }
    result = eddy::run_experiment(text, config_path, kind, opt);
    for (const auto& r : result.rows)
      std::cout << "n=" << r.n << "  theta_linf=" << r.theta_linf << "  D=" << r.D << "  stderr=" << r.stderr_D
                << "  M=" << r.M << "  seconds=" << r.seconds << "\n";
  }
  (result.exit_code == eddy::kExitOk ? std::cout : std::cerr) << result.message << "\n";
  return result.exit_code;
}
