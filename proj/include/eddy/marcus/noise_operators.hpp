#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "eddy/fourier/coupling.hpp"
#include "eddy/levy/theta.hpp"

namespace eddy {

// The coupling operators A_k^n for every k in the support of theta, built once
// and shared read-only between paths.
class NoiseOperators {
 public:
  NoiseOperators(const NoiseCoefficients& theta, int cutoff) : cutoff_(cutoff) {
    if (cutoff < 1) throw std::invalid_argument("NoiseOperators: cutoff must be >= 1");
    for (const auto& e : theta.support()) {
      slot_[e.mode] = ops_.size();
      ops_.emplace_back(e.mode, cutoff);
      theta_.push_back(e.value);
    }
  }

  int cutoff() const { return cutoff_; }
  std::size_t size() const { return ops_.size(); }
  const CouplingOperator& op(std::size_t i) const { return ops_[i]; }
  double theta(std::size_t i) const { return theta_[i]; }

  std::size_t slot(const ModeIndex& k) const {
    auto it = slot_.find(k);
    if (it == slot_.end()) throw std::out_of_range("NoiseOperators: mode " + k.to_string() + " is outside the theta support");
    return it->second;
  }

 private:
  int cutoff_;
  std::vector<CouplingOperator> ops_;
  std::vector<double> theta_;
  std::map<ModeIndex, std::size_t> slot_;
};

}  // namespace eddy
