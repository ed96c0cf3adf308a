#pragma once

#include <cmath>
#include <cstdint>

#include "eddy/fourier/modes.hpp"

namespace eddy {

// splitmix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: draw i is mix64(key + i * gamma), with the key derived
// from (seed, path, mode). Streams for different keys never share state, so
// results do not depend on the order in which paths or modes are processed.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t path, std::uint64_t tag) {
    key_ = mix64(mix64(mix64(seed) ^ (path * 0xd1b54a32d192ed03ULL)) ^ tag);
  }
  CounterStream(std::uint64_t seed, std::uint64_t path, const ModeIndex& mode)
      : CounterStream(seed, path, mode_tag(mode)) {}

  static std::uint64_t mode_tag(const ModeIndex& mode) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(mode.k1())) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(mode.k2()));
  }

  std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // Uniform on (0, 1].
  double uniform_open_low() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log(uniform_open_low()) / rate; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace eddy
