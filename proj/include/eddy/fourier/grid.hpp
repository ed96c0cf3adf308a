#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "eddy/fourier/coupling.hpp"
#include "eddy/fourier/spectral_field.hpp"

namespace eddy {

namespace detail {

// FFTW planning is not thread-safe; execution on fresh aligned arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

inline FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

}  // namespace detail

// Uniform G x G grid on T^2 with nodes x_j = (j1/G, j2/G), row-major in j1.
// Converts between e-basis coefficients and nodal values with FFTW.
class PeriodicGrid {
 public:
  explicit PeriodicGrid(int size) : size_(size) {
    if (size < 2) throw std::invalid_argument("PeriodicGrid: size must be >= 2");
    const auto n = points();
    auto in = detail::fftw_buffer(n);
    auto out = detail::fftw_buffer(n);
    std::scoped_lock lock(detail::fftw_planner_mutex());
    forward_ = fftw_plan_dft_2d(size, size, in.get(), out.get(), FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_2d(size, size, in.get(), out.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~PeriodicGrid() {
    std::scoped_lock lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }
  PeriodicGrid(const PeriodicGrid&) = delete;
  PeriodicGrid& operator=(const PeriodicGrid&) = delete;

  int size() const { return size_; }
  std::size_t points() const { return static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_); }
  Point node(int j1, int j2) const { return {static_cast<double>(j1) / size_, static_cast<double>(j2) / size_}; }

  std::vector<double> synthesize(const SpectralField& f) const {
    if (2 * f.cutoff() >= size_) throw std::invalid_argument("PeriodicGrid::synthesize: grid too coarse for cutoff");
    auto in = detail::fftw_buffer(points());
    auto out = detail::fftw_buffer(points());
    std::fill_n(&in[0][0], 2 * points(), 0.0);
    const ModeSet& basis = f.basis();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const ModeIndex& l = basis[i];
      if (!l.is_plus()) continue;
      const double c = f[i];
      const double s = f[static_cast<std::size_t>(basis.index_of(-l))];
      if (c == 0.0 && s == 0.0) continue;
      // F_l = (c_l + i c_{-l}) / sqrt2, F_{-l} = conj(F_l).
      const double re = c / std::numbers::sqrt2;
      const double im = s / std::numbers::sqrt2;
      auto& a = in[slot(l.k1(), l.k2())];
      a[0] += re;
      a[1] += im;
      auto& b = in[slot(-l.k1(), -l.k2())];
      b[0] += re;
      b[1] -= im;
    }
    fftw_execute_dft(backward_, in.get(), out.get());
    std::vector<double> values(points());
    for (std::size_t j = 0; j < points(); ++j) values[j] = out[j][0];
    return values;
  }

  // Coefficients of the modes |l| <= cutoff of the trigonometric interpolant.
  SpectralField analyze(std::span<const double> values, int cutoff) const {
    if (values.size() != points()) throw std::invalid_argument("PeriodicGrid::analyze: wrong number of values");
    if (2 * cutoff >= size_) throw std::invalid_argument("PeriodicGrid::analyze: grid too coarse for cutoff");
    auto in = detail::fftw_buffer(points());
    auto out = detail::fftw_buffer(points());
    for (std::size_t j = 0; j < points(); ++j) {
      in[j][0] = values[j];
      in[j][1] = 0.0;
    }
    fftw_execute_dft(forward_, in.get(), out.get());
    const double norm = std::numbers::sqrt2 / static_cast<double>(points());
    SpectralField f(cutoff);
    const ModeSet& basis = f.basis();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const ModeIndex& l = basis[i];
      const auto& F = out[slot(l.k1(), l.k2())];
      // c_l = sqrt2 Re F_l, c_{-l} = sqrt2 Im F_l for l plus.
      f[i] = l.is_plus() ? norm * F[0] : norm * out[slot(-l.k1(), -l.k2())][1];
    }
    return f;
  }

  static const PeriodicGrid& of(int size) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<const PeriodicGrid>> cache;
    std::scoped_lock lock(mutex);
    auto& entry = cache[size];
    if (!entry) entry = std::make_unique<const PeriodicGrid>(size);
    return *entry;
  }

 private:
  std::size_t slot(int p1, int p2) const {
    const int a = ((p1 % size_) + size_) % size_;
    const int b = ((p2 % size_) + size_) % size_;
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(size_) + static_cast<std::size_t>(b);
  }

  int size_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

// Smallest power of two strictly above `minimum`.
inline int grid_size_above(int minimum) {
  int g = 4;
  while (g <= minimum) g *= 2;
  return g;
}

// Pi_n(sigma_k . grad f) by a pseudo-spectral product on the grid. This is the
// independent route against which the analytic coupling matrices are checked.
inline SpectralField pseudo_spectral_advect(const ModeIndex& k, const SpectralField& f, const PeriodicGrid& grid) {
  const int n = f.cutoff();
  if (grid.size() <= 2 * n + std::max(std::abs(k.k1()), std::abs(k.k2())))
    throw std::invalid_argument("pseudo_spectral_advect: grid aliases onto retained modes");
  const SigmaField sigma = sigma_field(k);
  SpectralField d1(n), d2(n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const ModeIndex& l = f.basis()[i];
    const auto j = static_cast<std::size_t>(f.basis().index_of(-l));
    d1[j] += kTwoPi * l.k1() * f[i];
    d2[j] += kTwoPi * l.k2() * f[i];
  }
  const auto g1 = grid.synthesize(d1);
  const auto g2 = grid.synthesize(d2);
  std::vector<double> prod(grid.points());
  for (int j1 = 0; j1 < grid.size(); ++j1) {
    for (int j2 = 0; j2 < grid.size(); ++j2) {
      const std::size_t j = static_cast<std::size_t>(j1) * static_cast<std::size_t>(grid.size()) + static_cast<std::size_t>(j2);
      const Vec2 s = sigma(grid.node(j1, j2));
      prod[j] = s[0] * g1[j] + s[1] * g2[j];
    }
  }
  return grid.analyze(prod, n);
}

}  // namespace eddy
