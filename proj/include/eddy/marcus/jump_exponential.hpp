#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "eddy/fourier/coupling.hpp"

namespace eddy {

// e^{-w A} for one coupling operator, stored blockwise. Modes outside every
// block are fixed by A and hence by the exponential.
class JumpPropagator {
 public:
  JumpPropagator(const CouplingOperator& A, double w) : cutoff_(A.cutoff()) {
    for (const auto& b : A.blocks()) {
      blocks_.push_back(&b.index);
      const Eigen::MatrixXd arg = -w * b.matrix;
      exps_.push_back(arg.exp());
    }
  }

  int cutoff() const { return cutoff_; }

  SpectralField apply(const SpectralField& f) const {
    if (f.cutoff() != cutoff_) throw std::invalid_argument("jump_exponential: cutoff mismatch");
    SpectralField out = f;
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const auto& index = *blocks_[bi];
      Eigen::VectorXd x(index.size());
      for (std::size_t i = 0; i < index.size(); ++i) x[static_cast<Eigen::Index>(i)] = f[index[i]];
      const Eigen::VectorXd y = exps_[bi] * x;
      for (std::size_t i = 0; i < index.size(); ++i) out[index[i]] = y[static_cast<Eigen::Index>(i)];
    }
    return out;
  }

 private:
  int cutoff_;
  std::vector<const std::vector<int>*> blocks_;  // owned by the CouplingOperator
  std::vector<Eigen::MatrixXd> exps_;
};

// e^{-w A} f. Scaling and squaring with a Pade kernel, one block at a time.
inline SpectralField jump_exponential(const CouplingOperator& A, double w, const SpectralField& f) {
  A.check(f);
  if (w == 0.0) return f;
  return JumpPropagator(A, w).apply(f);
}

// Propagators keyed by (mode position, w). Worth it when jump sizes take few
// values (atomic nu); thread-safe so that paths can share one cache.
class PropagatorCache {
 public:
  const JumpPropagator& get(std::size_t mode_slot, const CouplingOperator& A, double w) {
    std::scoped_lock lock(mutex_);
    auto it = cache_.find({mode_slot, w});
    if (it == cache_.end()) it = cache_.emplace(std::pair{mode_slot, w}, JumpPropagator(A, w)).first;
    return it->second;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::size_t, double>, JumpPropagator> cache_;
};

}  // namespace eddy
