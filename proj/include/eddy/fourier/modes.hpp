#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eddy {

using Point = std::array<double, 2>;
using Vec2 = std::array<double, 2>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class PartitionClass { plus, minus };

// A nonzero lattice point of Z^2. The basis function attached to it is a
// cosine on the plus half-lattice and a sine on the minus half-lattice.
class ModeIndex {
 public:
  ModeIndex(int k1, int k2) : k1_(k1), k2_(k2) {
    if (k1 == 0 && k2 == 0) throw std::invalid_argument("ModeIndex: zero mode is not part of the basis");
  }

  int k1() const { return k1_; }
  int k2() const { return k2_; }
  int norm_sq() const { return k1_ * k1_ + k2_ * k2_; }
  double norm() const { return std::sqrt(static_cast<double>(norm_sq())); }

  // k is "plus" iff k1 > 0, or k1 == 0 and k2 > 0.
  PartitionClass partition() const {
    return (k1_ > 0 || (k1_ == 0 && k2_ > 0)) ? PartitionClass::plus : PartitionClass::minus;
  }
  bool is_plus() const { return partition() == PartitionClass::plus; }

  ModeIndex operator-() const { return {-k1_, -k2_}; }
  ModeIndex plus_representative() const { return is_plus() ? *this : -*this; }

  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;

  std::string to_string() const { return "(" + std::to_string(k1_) + "," + std::to_string(k2_) + ")"; }

 private:
  int k1_;
  int k2_;
};

inline double dot(const ModeIndex& k, const Point& x) { return k.k1() * x[0] + k.k2() * x[1]; }

// e_l(x) = sqrt(2) cos(2 pi l.x) for l plus, sqrt(2) sin(2 pi l.x) for l minus.
inline double eval_basis(const ModeIndex& l, const Point& x) {
  const double phase = kTwoPi * dot(l, x);
  return std::numbers::sqrt2 * (l.is_plus() ? std::cos(phase) : std::sin(phase));
}

// Ordered list of the modes 0 < |l| <= n. Ordering is by |l|^2, then l1, then
// l2, so the modes of a smaller cutoff form a prefix of a larger one.
class ModeSet {
 public:
  explicit ModeSet(int cutoff) : cutoff_(cutoff), side_(2 * cutoff + 1) {
    if (cutoff < 1) throw std::invalid_argument("ModeSet: cutoff must be >= 1");
    const int n2 = cutoff * cutoff;
    for (int a = -cutoff; a <= cutoff; ++a)
      for (int b = -cutoff; b <= cutoff; ++b)
        if (a * a + b * b > 0 && a * a + b * b <= n2) modes_.emplace_back(a, b);
    std::ranges::sort(modes_, [](const ModeIndex& x, const ModeIndex& y) {
      if (x.norm_sq() != y.norm_sq()) return x.norm_sq() < y.norm_sq();
      if (x.k1() != y.k1()) return x.k1() < y.k1();
      return x.k2() < y.k2();
    });
    lookup_.assign(static_cast<std::size_t>(side_) * side_, -1);
    for (std::size_t i = 0; i < modes_.size(); ++i) lookup_[slot(modes_[i].k1(), modes_[i].k2())] = static_cast<int>(i);
  }

  int cutoff() const { return cutoff_; }
  std::size_t size() const { return modes_.size(); }
  const ModeIndex& operator[](std::size_t i) const { return modes_[i]; }
  std::span<const ModeIndex> modes() const { return modes_; }

  // Position of l in the ordering, or -1 when |l| > cutoff.
  int index_of(int l1, int l2) const {
    if (std::abs(l1) > cutoff_ || std::abs(l2) > cutoff_) return -1;
    return lookup_[slot(l1, l2)];
  }
  int index_of(const ModeIndex& l) const { return index_of(l.k1(), l.k2()); }
  bool contains(const ModeIndex& l) const { return index_of(l) >= 0; }

  // Shared immutable instance per cutoff.
  static const ModeSet& of(int cutoff) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const ModeSet>> cache;
    std::scoped_lock lock(mutex);
    auto& entry = cache[cutoff];
    if (!entry) entry = std::make_unique<const ModeSet>(cutoff);
    return *entry;
  }

 private:
  std::size_t slot(int l1, int l2) const {
    return static_cast<std::size_t>(l1 + cutoff_) * side_ + static_cast<std::size_t>(l2 + cutoff_);
  }

  int cutoff_;
  int side_;
  std::vector<ModeIndex> modes_;
  std::vector<int> lookup_;
};

}  // namespace eddy
