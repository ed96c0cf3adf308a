#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eddy/transport/galerkin.hpp"

namespace eddy {

static_assert(std::endian::native == std::endian::little, "trajectory dumps assume a little-endian host");

// Binary layout: int64 cutoff n, float64 T, int64 checkpoint count, then one
// block of float64 coefficients per checkpoint in ModeSet order.
inline void write_trajectory(const std::string& path, const Trajectory& traj, double T) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const std::int64_t n = traj.states.empty() ? 0 : traj.states.front().cutoff();
  const std::int64_t count = static_cast<std::int64_t>(traj.states.size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&T), sizeof T);
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  for (const auto& s : traj.states)
    out.write(reinterpret_cast<const char*>(s.vec().data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed for " + path);
}

struct TrajectoryDump {
  std::int64_t cutoff = 0;
  double T = 0.0;
  std::vector<SpectralField> states;
};

inline TrajectoryDump read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  TrajectoryDump d;
  std::int64_t count = 0;
  in.read(reinterpret_cast<char*>(&d.cutoff), sizeof d.cutoff);
  in.read(reinterpret_cast<char*>(&d.T), sizeof d.T);
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in || d.cutoff < 1 || count < 0) throw std::runtime_error("malformed trajectory header in " + path);
  for (std::int64_t c = 0; c < count; ++c) {
    SpectralField f(static_cast<int>(d.cutoff));
    in.read(reinterpret_cast<char*>(f.vec().data()), static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!in) throw std::runtime_error("truncated trajectory data in " + path);
    d.states.push_back(std::move(f));
  }
  return d;
}

}  // namespace eddy
