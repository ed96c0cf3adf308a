#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "eddy/fourier/spectral_field.hpp"

namespace eddy::testing {

inline SpectralField random_field(int cutoff, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  SpectralField f(cutoff);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = g(rng);
  return f;
}

inline SpectralField random_unit_field(int cutoff, std::mt19937_64& rng) {
  SpectralField f = random_field(cutoff, rng);
  f *= 1.0 / f.l2_norm();
  return f;
}

// Tensor trapezoid rule on an m x m grid; exact for trigonometric polynomials
// of degree < m in each variable.
inline double grid_integral(const std::function<double(const Point&)>& f, int m) {
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += f({static_cast<double>(i) / m, static_cast<double>(j) / m});
  return s / (static_cast<double>(m) * m);
}

// Gradient of e_l from the closed forms of d/dx cos and d/dx sin.
inline Vec2 grad_basis(const ModeIndex& l, const Point& x) {
  const double phase = 2.0 * std::numbers::pi * (l.k1() * x[0] + l.k2() * x[1]);
  const double d = std::numbers::sqrt2 * 2.0 * std::numbers::pi * (l.is_plus() ? -std::sin(phase) : std::cos(phase));
  return {d * l.k1(), d * l.k2()};
}

inline Vec2 grad_field(const SpectralField& f, const Point& x) {
  Vec2 g{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    const Vec2 gl = grad_basis(f.basis()[i], x);
    g[0] += f[i] * gl[0];
    g[1] += f[i] * gl[1];
  }
  return g;
}

// Coefficients of the projection of a pointwise function onto H_n, by
// quadrature against every basis function.
inline SpectralField project_by_quadrature(const std::function<double(const Point&)>& f, int n, int m) {
  std::vector<double> values(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) values[static_cast<std::size_t>(i) * m + j] = f({static_cast<double>(i) / m, static_cast<double>(j) / m});
  SpectralField out(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    double s = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        s += values[static_cast<std::size_t>(i) * m + j] * eval_basis(out.basis()[k], {static_cast<double>(i) / m, static_cast<double>(j) / m});
    out[k] = s / (static_cast<double>(m) * m);
  }
  return out;
}

}  // namespace eddy::testing
