#pragma once

#include <stdexcept>

#include "eddy/fourier/spectral_field.hpp"

namespace eddy {

// d/dx_axis of f. Uses grad e_l = 2 pi l e_{-l}, so H_n is mapped to itself.
inline SpectralField partial(const SpectralField& f, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("partial: axis must be 0 or 1");
  const ModeSet& basis = f.basis();
  SpectralField out(f.cutoff());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    const ModeIndex& l = basis[i];
    const int li = axis == 0 ? l.k1() : l.k2();
    out[static_cast<std::size_t>(basis.index_of(-l))] += kTwoPi * li * f[i];
  }
  return out;
}

struct VelocityField {
  SpectralField u1;
  SpectralField u2;
};

// u = (d2 psi, -d1 psi) with -Delta psi = xi. With this orientation
// curl u = d1 u2 - d2 u1 = xi and div u = 0 hold coefficient-wise.
inline VelocityField biot_savart(const SpectralField& xi) {
  const ModeSet& basis = xi.basis();
  VelocityField u{SpectralField(xi.cutoff()), SpectralField(xi.cutoff())};
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] == 0.0) continue;
    const ModeIndex& l = basis[i];
    const auto j = static_cast<std::size_t>(basis.index_of(-l));
    // psi_l = xi_l / (4 pi^2 |l|^2); d_i psi contributes 2 pi l_i psi_l at -l.
    const double scale = xi[i] / (kTwoPi * l.norm_sq());
    u.u1[j] += l.k2() * scale;
    u.u2[j] -= l.k1() * scale;
  }
  return u;
}

inline SpectralField divergence(const VelocityField& u) { return partial(u.u1, 0) + partial(u.u2, 1); }
inline SpectralField curl(const VelocityField& u) { return partial(u.u2, 0) - partial(u.u1, 1); }

inline double l2_norm(const VelocityField& u) {
  return std::sqrt(u.u1.vec().squaredNorm() + u.u2.vec().squaredNorm());
}

// ||grad u||_{L2}: the H^1 seminorm of a mean-zero field.
inline double h1_seminorm(const VelocityField& u) {
  double s = 0.0;
  for (const auto* c : {&u.u1, &u.u2})
    for (std::size_t i = 0; i < c->size(); ++i) s += kTwoPi * kTwoPi * c->basis()[i].norm_sq() * (*c)[i] * (*c)[i];
  return std::sqrt(s);
}

}  // namespace eddy
