#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "eddy/fourier/modes.hpp"
#include "eddy/fourier/spectral_field.hpp"

namespace eddy {

// sigma_k(x) = a_k e_k(x), a_k = k_perp / |k| taken from the plus representative,
// k_perp = (k2, -k1). Hence a_k = a_{-k}.
struct SigmaField {
  ModeIndex k;
  Vec2 a;

  Vec2 operator()(const Point& x) const {
    const double e = eval_basis(k, x);
    return {a[0] * e, a[1] * e};
  }
};

inline SigmaField sigma_field(const ModeIndex& k) {
  const ModeIndex r = k.plus_representative();
  const double nk = r.norm();
  return {k, {r.k2() / nk, -r.k1() / nk}};
}

struct BasisTerm {
  ModeIndex mode;
  double coeff;
};

namespace detail {

inline int quarter_phase(const ModeIndex& m) { return m.is_plus() ? 0 : 1; }

// sqrt(2) cos(2 pi p.x - q pi/2) written in the e-basis; nothing for p = 0.
inline void append_phased_cosine(int p1, int p2, int q, double scale, std::vector<BasisTerm>& out) {
  if (p1 == 0 && p2 == 0) return;
  q = ((q % 4) + 4) % 4;
  static constexpr int kCos[4] = {1, 0, -1, 0};
  static constexpr int kSin[4] = {0, 1, 0, -1};
  const ModeIndex p(p1, p2);
  // sqrt2 cos(2pi p.x) and sqrt2 sin(2pi p.x) in terms of e_p, e_{-p}.
  if (p.is_plus()) {
    if (kCos[q] != 0) out.push_back({p, scale * kCos[q]});
    if (kSin[q] != 0) out.push_back({-p, -scale * kSin[q]});
  } else {
    if (kCos[q] != 0) out.push_back({-p, scale * kCos[q]});
    if (kSin[q] != 0) out.push_back({p, scale * kSin[q]});
  }
}

}  // namespace detail

// Product e_k e_m = (1/sqrt2)[ c(k+m) + c(k-m) ] with quarter-turn phases.
inline std::vector<BasisTerm> basis_product(const ModeIndex& k, const ModeIndex& m, double scale = 1.0) {
  std::vector<BasisTerm> out;
  const int qk = detail::quarter_phase(k);
  const int qm = detail::quarter_phase(m);
  const double s = scale / std::numbers::sqrt2;
  detail::append_phased_cosine(k.k1() + m.k1(), k.k2() + m.k2(), qk + qm, s, out);
  detail::append_phased_cosine(k.k1() - m.k1(), k.k2() - m.k2(), qk - qm, s, out);
  return out;
}

// sigma_k . grad e_l, exactly, with no projection. Uses grad e_l = 2 pi l e_{-l}
// and a_k . l = (r2 l1 - r1 l2) / |k| for the plus representative r of k.
inline std::vector<BasisTerm> advect_basis(const ModeIndex& k, const ModeIndex& l) {
  const ModeIndex r = k.plus_representative();
  const int cross = r.k2() * l.k1() - r.k1() * l.k2();
  if (cross == 0) return {};
  return basis_product(k, -l, kTwoPi * cross / r.norm());
}

// A_k^n = Pi_n (sigma_k . grad) restricted to H_n. Stored as dense blocks over
// the connected components of its sparsity graph; each block is antisymmetric
// by construction (only the lower triangle is computed, the upper mirrored).
class CouplingOperator {
 public:
  struct Block {
    std::vector<int> index;
    Eigen::MatrixXd matrix;
  };

  CouplingOperator(ModeIndex k, int cutoff) : k_(k), cutoff_(cutoff) {
    const ModeSet& basis = ModeSet::of(cutoff);
    std::map<std::pair<int, int>, double> lower;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      for (const auto& term : advect_basis(k, basis[j])) {
        const int i = basis.index_of(term.mode);
        if (i > static_cast<int>(j)) lower[{i, static_cast<int>(j)}] += term.coeff;
      }
    }
    build_blocks(basis.size(), lower);
  }

  const ModeIndex& mode() const { return k_; }
  int cutoff() const { return cutoff_; }
  std::span<const Block> blocks() const { return blocks_; }
  bool is_zero() const { return blocks_.empty(); }

  SpectralField apply(const SpectralField& f) const {
    check(f);
    SpectralField out(cutoff_);
    for (const auto& b : blocks_) {
      Eigen::VectorXd x(b.index.size());
      for (std::size_t i = 0; i < b.index.size(); ++i) x[static_cast<Eigen::Index>(i)] = f[b.index[i]];
      const Eigen::VectorXd y = b.matrix * x;
      for (std::size_t i = 0; i < b.index.size(); ++i) out[b.index[i]] = y[static_cast<Eigen::Index>(i)];
    }
    return out;
  }

  Eigen::MatrixXd dense() const {
    const auto dim = static_cast<Eigen::Index>(ModeSet::of(cutoff_).size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& b : blocks_)
      for (std::size_t i = 0; i < b.index.size(); ++i)
        for (std::size_t j = 0; j < b.index.size(); ++j)
          m(b.index[i], b.index[j]) = b.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return m;
  }

  void check(const SpectralField& f) const {
    if (f.cutoff() != cutoff_) throw std::invalid_argument("CouplingOperator: cutoff mismatch");
  }

 private:
  void build_blocks(std::size_t dim, const std::map<std::pair<int, int>, double>& lower) {
    std::vector<int> parent(dim);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [ij, v] : lower) {
      if (v == 0.0) continue;
      parent[find(ij.first)] = find(ij.second);
    }
    std::map<int, std::vector<int>> groups;
    for (const auto& [ij, v] : lower) {
      if (v == 0.0) continue;
      groups[find(ij.first)];
    }
    for (int i = 0; i < static_cast<int>(dim); ++i) {
      auto it = groups.find(find(i));
      if (it != groups.end()) it->second.push_back(i);
    }
    std::vector<int> local(dim, -1);
    std::vector<int> owner(dim, -1);
    for (auto& [root, members] : groups) {
      Block b;
      b.index = members;
      b.matrix = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(members.size()), static_cast<Eigen::Index>(members.size()));
      for (std::size_t i = 0; i < members.size(); ++i) {
        local[members[i]] = static_cast<int>(i);
        owner[members[i]] = static_cast<int>(blocks_.size());
      }
      blocks_.push_back(std::move(b));
    }
    for (const auto& [ij, v] : lower) {
      if (v == 0.0) continue;
      auto& m = blocks_[owner[ij.first]].matrix;
      m(local[ij.first], local[ij.second]) = v;
      m(local[ij.second], local[ij.first]) = -v;
    }
  }

  ModeIndex k_;
  int cutoff_;
  std::vector<Block> blocks_;
};

inline CouplingOperator coupling_matrix(const ModeIndex& k, int n) {
  if (n < 1) throw std::invalid_argument("coupling_matrix: cutoff must be >= 1");
  return CouplingOperator(k, n);
}

}  // namespace eddy
