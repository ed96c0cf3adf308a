#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>

#include "eddy/fourier/modes.hpp"

namespace eddy {

// Real mean-zero function on T^2 expanded in {e_l : 0 < |l| <= cutoff}.
// The basis is orthonormal, so the L2 norm is the Euclidean norm of coeffs.
class SpectralField {
 public:
  explicit SpectralField(int cutoff) : basis_(&ModeSet::of(cutoff)), coeffs_(Eigen::VectorXd::Zero(basis_->size())) {}

  SpectralField(int cutoff, Eigen::VectorXd coeffs) : basis_(&ModeSet::of(cutoff)), coeffs_(std::move(coeffs)) {
    if (static_cast<std::size_t>(coeffs_.size()) != basis_->size())
      throw std::invalid_argument("SpectralField: coefficient count does not match cutoff");
  }

  static SpectralField mode(int cutoff, const ModeIndex& l, double amplitude = 1.0) {
    SpectralField f(cutoff);
    const int i = f.basis().index_of(l);
    if (i < 0) throw std::out_of_range("SpectralField::mode: " + l.to_string() + " exceeds cutoff");
    f.coeffs_[i] = amplitude;
    return f;
  }

  int cutoff() const { return basis_->cutoff(); }
  const ModeSet& basis() const { return *basis_; }
  std::size_t size() const { return basis_->size(); }

  const Eigen::VectorXd& vec() const { return coeffs_; }
  Eigen::VectorXd& vec() { return coeffs_; }

  double operator[](std::size_t i) const { return coeffs_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return coeffs_[static_cast<Eigen::Index>(i)]; }

  // Coefficient of e_l; zero when l is outside the cutoff.
  double coeff(const ModeIndex& l) const {
    const int i = basis_->index_of(l);
    return i < 0 ? 0.0 : coeffs_[i];
  }

  double l2_norm() const { return coeffs_.norm(); }

  double evaluate(const Point& x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (coeffs_[static_cast<Eigen::Index>(i)] != 0.0) s += coeffs_[static_cast<Eigen::Index>(i)] * eval_basis((*basis_)[i], x);
    return s;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require_same(o);
    coeffs_ += o.coeffs_;
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require_same(o);
    coeffs_ -= o.coeffs_;
    return *this;
  }
  SpectralField& operator*=(double s) {
    coeffs_ *= s;
    return *this;
  }
  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  void require_same(const SpectralField& o) const {
    if (o.cutoff() != cutoff()) throw std::invalid_argument("SpectralField: cutoff mismatch");
  }

 private:
  const ModeSet* basis_;
  Eigen::VectorXd coeffs_;
};

inline double inner(const SpectralField& a, const SpectralField& b) {
  a.require_same(b);
  return a.vec().dot(b.vec());
}

// Orthogonal projection onto H_n (truncation or zero-extension).
inline SpectralField project(const SpectralField& f, int n) {
  SpectralField out(n);
  const auto common = static_cast<Eigen::Index>(std::min(out.size(), f.size()));
  // Modes are ordered by |l|, so H_min(m,n) is a common prefix.
  out.vec().head(common) = f.vec().head(common);
  return out;
}

// Delta e_l = -4 pi^2 |l|^2 e_l.
inline SpectralField laplacian(const SpectralField& f) {
  SpectralField out(f.cutoff());
  for (std::size_t i = 0; i < f.size(); ++i)
    out[i] = -kTwoPi * kTwoPi * f.basis()[i].norm_sq() * f[i];
  return out;
}

// Field built from (l1, l2, amplitude) triples.
struct ModeAmplitude {
  ModeIndex mode;
  double amplitude;
};

inline SpectralField field_from_modes(int cutoff, std::span<const ModeAmplitude> terms) {
  SpectralField f(cutoff);
  for (const auto& t : terms) {
    const int i = f.basis().index_of(t.mode);
    if (i < 0) throw std::out_of_range("field_from_modes: " + t.mode.to_string() + " exceeds cutoff");
    f[static_cast<std::size_t>(i)] += t.amplitude;
  }
  return f;
}

}  // namespace eddy
