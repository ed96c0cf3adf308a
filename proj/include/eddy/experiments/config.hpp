#pragma once

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eddy/transport/experiment.hpp"

namespace eddy {

enum class ExperimentKind { identity_check, corrector_check, transport_limit, euler_limit };

inline const char* experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::identity_check: return "identity-check";
    case ExperimentKind::corrector_check: return "corrector-check";
    case ExperimentKind::transport_limit: return "transport-limit";
    case ExperimentKind::euler_limit: return "euler-limit";
  }
  return "?";
}

inline std::optional<ExperimentKind> parse_experiment_name(const std::string& s) {
  for (auto k : {ExperimentKind::identity_check, ExperimentKind::corrector_check, ExperimentKind::transport_limit,
                 ExperimentKind::euler_limit})
    if (s == experiment_name(k)) return k;
  return std::nullopt;
}

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::transport_limit;
  LimitSettings limit;      // nu, theta, initial condition, T, dt, eps, M, seed, cutoffs, tests
  int points = 100;         // identity-check: random evaluation points
  double tolerance = 1e-10; // identity-check: entrywise tolerance
  bool dump_trajectories = false;
  std::string output;       // output directory from the file (may be empty)
};

namespace detail {

class ConfigReader {
 public:
  ConfigReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    const auto m = node.Mark();
    std::ostringstream os;
    os << source_;
    if (!m.is_null()) os << ":" << m.line + 1 << ":" << m.column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, "field '" + field + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, "field '" + field + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& node, const std::string& field) const {
    const double v = scalar<double>(node, field);
    if (!(v > 0.0) || !std::isfinite(v)) fail(node, "field '" + field + "' must be positive");
    return v;
  }

  int positive_int(const YAML::Node& node, const std::string& field) const {
    const long long v = scalar<long long>(node, field);
    if (v < 1 || v > 1'000'000'000) fail(node, "field '" + field + "' must be a positive integer");
    return static_cast<int>(v);
  }

  void allow_keys(const YAML::Node& map, const std::string& field, std::initializer_list<const char*> keys) const {
    if (!map.IsMap()) fail(map, "field '" + field + "' must be a mapping");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.contains(key)) fail(kv.first, "unknown field '" + (field.empty() ? key : field + "." + key) + "'");
    }
  }

  ModeIndex mode(const YAML::Node& node, const std::string& field) const {
    if (!node.IsSequence() || node.size() != 2) fail(node, "field '" + field + "' entries must be [l1, l2]");
    const int a = scalar<int>(node[0], field), b = scalar<int>(node[1], field);
    if (a == 0 && b == 0) fail(node, "field '" + field + "' contains the zero mode");
    return {a, b};
  }

 private:
  std::string source_;
};

inline LevyMeasure parse_nu(const ConfigReader& r, const YAML::Node& node) {
  r.allow_keys(node, "nu", {"type", "atoms", "alpha", "scale", "lower", "upper"});
  if (!node["type"]) r.fail(node, "field 'nu.type' is required (atoms or power_law)");
  const auto type = r.scalar<std::string>(node["type"], "nu.type");
  try {
    if (type == "atoms") {
      const auto atoms = node["atoms"];
      if (!atoms || !atoms.IsSequence() || atoms.size() == 0) r.fail(node, "field 'nu.atoms' must be a list of [z, mass]");
      DiscreteAtoms d;
      for (const auto& a : atoms) {
        if (!a.IsSequence() || a.size() != 2) r.fail(a, "field 'nu.atoms' entries must be [z, mass]");
        d.atoms.push_back({r.scalar<double>(a[0], "nu.atoms"), r.scalar<double>(a[1], "nu.atoms")});
      }
      try {
        return LevyMeasure(std::move(d));
      } catch (const std::invalid_argument& e) {
        r.fail(atoms, std::string("field 'nu.atoms': ") + e.what());
      }
    }
    if (type == "power_law") {
      TruncatedPowerLaw p{};
      if (!node["alpha"] || !node["scale"]) r.fail(node, "fields 'nu.alpha' and 'nu.scale' are required for power_law");
      p.alpha = r.scalar<double>(node["alpha"], "nu.alpha");
      p.scale = r.scalar<double>(node["scale"], "nu.scale");
      if (node["lower"]) p.lower = r.scalar<double>(node["lower"], "nu.lower");
      if (node["upper"]) p.upper = r.scalar<double>(node["upper"], "nu.upper");
      try {
        return LevyMeasure(p);
      } catch (const std::invalid_argument& e) {
        r.fail(node, std::string("field 'nu': ") + e.what());
      }
    }
  } catch (const YAML::Exception& e) {
    r.fail(node, std::string("field 'nu': ") + e.what());
  }
  r.fail(node["type"], "field 'nu.type' must be 'atoms' or 'power_law'");
}

inline std::vector<ModeAmplitude> initial_preset(const ConfigReader& r, const YAML::Node& node, const std::string& name) {
  if (name == "single-mode") return {{ModeIndex(1, 0), 1.0}};
  if (name == "two-mode") return {{ModeIndex(1, 0), 1.0}, {ModeIndex(1, 1), 1.0}};
  if (name == "three-mode") return {{ModeIndex(1, 0), 1.0}, {ModeIndex(0, 1), 1.0}, {ModeIndex(1, 1), 1.0}};
  r.fail(node, "unknown initial_condition preset '" + name + "' (single-mode, two-mode, three-mode)");
}

}  // namespace detail

// Parses and validates a YAML experiment description. `source` names the
// origin in error messages (normally the file path).
inline ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  detail::ConfigReader r(source);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  if (!root.IsMap()) throw ConfigError(source + ": the config must be a YAML mapping");
  r.allow_keys(root, "", {"experiment", "seed", "nu", "theta", "initial_condition", "T", "dt", "eps", "M", "cutoffs",
                          "test_functions", "checkpoints", "solver", "sample_events", "dump_trajectories", "points",
                          "tolerance", "output"});
  ExperimentConfig c;
  LimitSettings& s = c.limit;
  if (!root["experiment"]) r.fail(root, "field 'experiment' is required");
  {
    const auto name = r.scalar<std::string>(root["experiment"], "experiment");
    const auto kind = parse_experiment_name(name);
    if (!kind) r.fail(root["experiment"], "unknown experiment '" + name + "'");
    c.experiment = *kind;
  }
  if (root["seed"]) s.seed = r.scalar<std::uint64_t>(root["seed"], "seed");
  if (root["nu"]) s.nu = detail::parse_nu(r, root["nu"]);
  if (root["theta"]) {
    const auto th = root["theta"];
    r.allow_keys(th, "theta", {"a", "n_list"});
    if (th["a"]) {
      s.a = r.scalar<double>(th["a"], "theta.a");
      if (!(s.a > 0.0 && s.a < 1.0)) r.fail(th["a"], "field 'theta.a' must lie in (0, 1)");
    }
    if (th["n_list"]) {
      const auto list = th["n_list"];
      if (!list.IsSequence() || list.size() == 0) r.fail(list, "field 'theta.n_list' must be a non-empty list");
      for (const auto& v : list) {
        const int n = r.positive_int(v, "theta.n_list");
        if (!s.n_list.empty() && n <= s.n_list.back()) r.fail(v, "field 'theta.n_list' must be strictly increasing");
        s.n_list.push_back(n);
      }
    }
  }
  if (s.n_list.empty()) r.fail(root, "field 'theta.n_list' is required");
  if (root["initial_condition"]) {
    const auto ic = root["initial_condition"];
    r.allow_keys(ic, "initial_condition", {"preset", "modes"});
    if (ic["preset"] && ic["modes"]) r.fail(ic, "give either 'initial_condition.preset' or 'initial_condition.modes'");
    if (ic["preset"]) {
      s.initial = detail::initial_preset(r, ic["preset"], r.scalar<std::string>(ic["preset"], "initial_condition.preset"));
    } else if (ic["modes"]) {
      const auto modes = ic["modes"];
      if (!modes.IsSequence() || modes.size() == 0) r.fail(modes, "field 'initial_condition.modes' must be a non-empty list");
      for (const auto& m : modes) {
        if (!m.IsSequence() || m.size() != 3) r.fail(m, "field 'initial_condition.modes' entries must be [l1, l2, amplitude]");
        const int a = r.scalar<int>(m[0], "initial_condition.modes"), b = r.scalar<int>(m[1], "initial_condition.modes");
        if (a == 0 && b == 0) r.fail(m, "field 'initial_condition.modes' contains the zero mode");
        s.initial.push_back({ModeIndex(a, b), r.scalar<double>(m[2], "initial_condition.modes")});
      }
    } else {
      r.fail(ic, "field 'initial_condition' needs 'preset' or 'modes'");
    }
  } else {
    s.initial = {{ModeIndex(1, 0), 1.0}, {ModeIndex(1, 1), 1.0}};
  }
  if (root["T"]) s.T = r.positive(root["T"], "T");
  if (root["dt"]) s.dt = r.positive(root["dt"], "dt");
  if (root["eps"]) {
    s.eps = r.scalar<double>(root["eps"], "eps");
    if (!(s.eps > 0.0 && s.eps < 1.0)) r.fail(root["eps"], "field 'eps' must lie in (0, 1)");
  }
  if (root["M"]) s.M = static_cast<std::size_t>(r.positive_int(root["M"], "M"));
  if (root["cutoffs"]) {
    const auto cut = root["cutoffs"];
    r.allow_keys(cut, "cutoffs", {"n_gal", "grid"});
    if (cut["n_gal"]) s.n_gal = r.positive_int(cut["n_gal"], "cutoffs.n_gal");
    if (cut["grid"]) s.grid = r.positive_int(cut["grid"], "cutoffs.grid");
  }
  if (root["test_functions"]) {
    const auto tf = root["test_functions"];
    if (!tf.IsSequence() || tf.size() == 0) r.fail(tf, "field 'test_functions' must be a non-empty list of [l1, l2]");
    for (const auto& m : tf) s.tests.push_back(r.mode(m, "test_functions"));
  } else {
    s.tests = {ModeIndex(1, 0), ModeIndex(1, 1), ModeIndex(0, 1), ModeIndex(-1, 0)};
  }
  if (root["checkpoints"]) s.checkpoints = r.positive_int(root["checkpoints"], "checkpoints");
  if (root["solver"]) {
    const auto name = r.scalar<std::string>(root["solver"], "solver");
    if (name == "characteristics") s.solver = TransportSolver::characteristics;
    else if (name == "galerkin") s.solver = TransportSolver::galerkin;
    else r.fail(root["solver"], "field 'solver' must be 'characteristics' or 'galerkin'");
  }
  if (root["sample_events"]) s.sample_events = r.scalar<bool>(root["sample_events"], "sample_events");
  if (root["dump_trajectories"]) c.dump_trajectories = r.scalar<bool>(root["dump_trajectories"], "dump_trajectories");
  if (root["points"]) c.points = r.positive_int(root["points"], "points");
  if (root["tolerance"]) c.tolerance = r.positive(root["tolerance"], "tolerance");
  if (root["output"]) c.output = r.scalar<std::string>(root["output"], "output");

  if (c.experiment == ExperimentKind::euler_limit && s.n_gal < 2 * s.n_list.back())
    r.fail(root["cutoffs"] ? root["cutoffs"] : root, "field 'cutoffs.n_gal' must be >= 2 * max(theta.n_list)");
  if (c.experiment == ExperimentKind::transport_limit && s.solver == TransportSolver::characteristics && !s.sample_events)
    r.fail(root["sample_events"], "the characteristics solver needs sample_events: true");
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace eddy
