#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eddy/fourier/modes.hpp"

namespace eddy {

// Finitely supported noise amplitudes k -> theta_k > 0, symmetric in k.
// Radial symmetry and unit l2 norm are checked on demand rather than
// enforced, so that callers can detect inadmissible coefficient sets.
class NoiseCoefficients {
 public:
  struct Entry {
    ModeIndex mode;
    double value;
  };

  explicit NoiseCoefficients(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw std::invalid_argument("NoiseCoefficients: empty support");
    std::ranges::sort(entries_, [](const Entry& x, const Entry& y) {
      if (x.mode.norm_sq() != y.mode.norm_sq()) return x.mode.norm_sq() < y.mode.norm_sq();
      return x.mode < y.mode;
    });
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      const auto& e = entries_[i];
      if (!(e.value > 0.0)) throw std::invalid_argument("NoiseCoefficients: values must be positive");
      if (i > 0 && entries_[i - 1].mode == e.mode) throw std::invalid_argument("NoiseCoefficients: duplicate mode");
      index_[e.mode] = i;
    }
    for (const auto& e : entries_) {
      auto it = index_.find(-e.mode);
      if (it == index_.end() || entries_[it->second].value != e.value)
        throw std::invalid_argument("NoiseCoefficients: theta_k must equal theta_{-k}");
    }
  }

  std::span<const Entry> support() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  double value(const ModeIndex& k) const {
    auto it = index_.find(k);
    return it == index_.end() ? 0.0 : entries_[it->second].value;
  }
  bool contains(const ModeIndex& k) const { return index_.contains(k); }

  double linf() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.value);
    return m;
  }
  double l2_norm() const {
    double s = 0.0;
    for (const auto& e : entries_) s += e.value * e.value;
    return std::sqrt(s);
  }
  int max_norm_sq() const { return entries_.back().mode.norm_sq(); }

  // theta_k == theta_j whenever |k| == |j| (bit-exact), and every lattice point
  // of a touched shell is in the support.
  bool is_radial() const {
    std::map<int, double> shell;
    std::map<int, int> count;
    for (const auto& e : entries_) {
      auto [it, inserted] = shell.emplace(e.mode.norm_sq(), e.value);
      if (!inserted && it->second != e.value) return false;
      ++count[e.mode.norm_sq()];
    }
    for (const auto& [r2, c] : count) {
      int lattice = 0;
      const int r = static_cast<int>(std::sqrt(static_cast<double>(r2))) + 1;
      for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
          if (a * a + b * b == r2) ++lattice;
      if (lattice != c) return false;
    }
    return true;
  }

 private:
  std::vector<Entry> entries_;
  std::map<ModeIndex, std::size_t> index_;
};

// theta^n_k proportional to |k|^{-a} on 1 <= |k| <= n, normalized in l2.
inline NoiseCoefficients make_theta(int n, double a) {
  if (n < 1) throw std::invalid_argument("make_theta: n must be >= 1");
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("make_theta: exponent a must lie in (0, 1)");
  const ModeSet& modes = ModeSet::of(n);
  std::vector<NoiseCoefficients::Entry> entries;
  entries.reserve(modes.size());
  double sum_sq = 0.0;
  for (const auto& k : modes.modes()) {
    const double w = std::pow(static_cast<double>(k.norm_sq()), -0.5 * a);
    entries.push_back({k, w});
    sum_sq += w * w;
  }
  const double norm = std::sqrt(sum_sq);
  for (auto& e : entries) e.value /= norm;
  return NoiseCoefficients(std::move(entries));
}

}  // namespace eddy
