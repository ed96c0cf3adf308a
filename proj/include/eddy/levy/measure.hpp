#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace eddy {

// Dimensional constant of the isotropy identity in 2D:
// sum_k theta_k^2 (sigma_k (x) sigma_k)(x) = 2 C_2 I. Confirmed by the
// brute-force isotropy tests.
inline constexpr double kIsotropyConstant = 0.25;

struct Atom {
  double z;
  double mass;
};

// Finite symmetric combination of point masses in [-1, 1] \ {0}.
struct DiscreteAtoms {
  std::vector<Atom> atoms;
};

// Density scale * |z|^{-1-alpha} on lower <= |z| <= upper (lower may be 0).
struct TruncatedPowerLaw {
  double alpha;
  double scale;
  double lower = 0.0;
  double upper = 1.0;
};

class LevyMeasure {
 public:
  using Variant = std::variant<DiscreteAtoms, TruncatedPowerLaw>;

  explicit LevyMeasure(DiscreteAtoms atoms) : v_(std::move(atoms)) { validate(std::get<DiscreteAtoms>(v_)); }
  explicit LevyMeasure(TruncatedPowerLaw law) : v_(law) { validate(law); }

  // (1/2) delta_z + (1/2) delta_{-z} scaled by total mass.
  static LevyMeasure two_atom(double z, double total_mass = 1.0) {
    return LevyMeasure(DiscreteAtoms{{{z, 0.5 * total_mass}, {-z, 0.5 * total_mass}}});
  }
  static LevyMeasure zero() { return LevyMeasure(DiscreteAtoms{}); }

  const Variant& variant() const { return v_; }
  bool is_atomic() const { return std::holds_alternative<DiscreteAtoms>(v_); }
  const DiscreteAtoms& atoms() const { return std::get<DiscreteAtoms>(v_); }
  const TruncatedPowerLaw& power_law() const { return std::get<TruncatedPowerLaw>(v_); }

 private:
  static void validate(const DiscreteAtoms& d) {
    for (const auto& a : d.atoms) {
      if (a.z == 0.0) throw std::invalid_argument("LevyMeasure: atom at z = 0 is not allowed");
      if (std::abs(a.z) > 1.0) throw std::invalid_argument("LevyMeasure: atoms must satisfy |z| <= 1");
      if (!(a.mass > 0.0)) throw std::invalid_argument("LevyMeasure: atom masses must be positive");
    }
    for (const auto& a : d.atoms) {
      double mirrored = 0.0, own = 0.0;
      for (const auto& b : d.atoms) {
        if (b.z == -a.z) mirrored += b.mass;
        if (b.z == a.z) own += b.mass;
      }
      if (mirrored != own) throw std::invalid_argument("LevyMeasure: measure must be symmetric (nu(B) = nu(-B))");
    }
  }
  static void validate(const TruncatedPowerLaw& p) {
    if (!(p.alpha > 0.0 && p.alpha < 2.0)) throw std::invalid_argument("LevyMeasure: alpha must lie in (0, 2)");
    if (!(p.scale > 0.0)) throw std::invalid_argument("LevyMeasure: scale must be positive");
    if (!(p.lower >= 0.0 && p.lower < p.upper && p.upper <= 1.0))
      throw std::invalid_argument("LevyMeasure: need 0 <= lower < upper <= 1");
  }

  Variant v_;
};

namespace detail {

// integral over lower <= |z| <= upper of |z|^p scale |z|^{-1-alpha} dz.
inline double power_law_moment(const TruncatedPowerLaw& p, double exponent) {
  const double e = exponent - p.alpha;
  if (e == 0.0) return 2.0 * p.scale * std::log(p.upper / p.lower);
  if (p.lower == 0.0 && e < 0.0) return INFINITY;
  return 2.0 * p.scale * (std::pow(p.upper, e) - (p.lower == 0.0 ? 0.0 : std::pow(p.lower, e))) / e;
}

}  // namespace detail

// integral of |z|^p nu(dz) for p >= 0 (p = 0 gives the total mass).
inline double absolute_moment(const LevyMeasure& nu, double p) {
  if (nu.is_atomic()) {
    double s = 0.0;
    for (const auto& a : nu.atoms().atoms) s += a.mass * std::pow(std::abs(a.z), p);
    return s;
  }
  return detail::power_law_moment(nu.power_law(), p);
}

inline double second_moment(const LevyMeasure& nu) {
  if (nu.is_atomic()) {
    double s = 0.0;
    for (const auto& a : nu.atoms().atoms) s += a.mass * a.z * a.z;
    return s;
  }
  return absolute_moment(nu, 2.0);
}

// kappa = C_2 * integral z^2 nu(dz).
inline double eddy_viscosity(const LevyMeasure& nu) { return kIsotropyConstant * second_moment(nu); }

// nu restricted to |z| >= eps (the part realized as jump events).
inline LevyMeasure restrict_above(const LevyMeasure& nu, double eps) {
  if (nu.is_atomic()) {
    DiscreteAtoms out;
    for (const auto& a : nu.atoms().atoms)
      if (std::abs(a.z) >= eps) out.atoms.push_back(a);
    return LevyMeasure(std::move(out));
  }
  auto p = nu.power_law();
  if (eps >= p.upper) return LevyMeasure::zero();
  p.lower = std::max(p.lower, eps);
  return LevyMeasure(p);
}

// nu restricted to |z| < eps (the part dropped from the event stream).
inline LevyMeasure restrict_below(const LevyMeasure& nu, double eps) {
  if (nu.is_atomic()) {
    DiscreteAtoms out;
    for (const auto& a : nu.atoms().atoms)
      if (std::abs(a.z) < eps) out.atoms.push_back(a);
    return LevyMeasure(std::move(out));
  }
  auto p = nu.power_law();
  if (eps <= p.lower) return LevyMeasure::zero();
  p.upper = std::min(p.upper, eps);
  return LevyMeasure(p);
}

// lambda_eps = nu(eps <= |z| <= 1), the jump intensity per mode.
inline double jump_intensity(const LevyMeasure& nu, double eps) { return absolute_moment(restrict_above(nu, eps), 0.0); }

// Variance rate of the compensated jumps omitted below eps.
inline double truncation_error_bound(const LevyMeasure& nu, double eps) { return second_moment(restrict_below(nu, eps)); }

// h(s) = integral (cos(z s) - 1) nu(dz). For symmetric nu this is the scalar
// symbol of the Marcus corrector on a rotation plane with frequency s.
inline double cosine_transform(const LevyMeasure& nu, double s) {
  if (nu.is_atomic()) {
    double h = 0.0;
    for (const auto& a : nu.atoms().atoms) h += a.mass * (std::cos(a.z * s) - 1.0);
    return h;
  }
  const auto& p = nu.power_law();
  s = std::abs(s);
  if (s == 0.0) return 0.0;
  auto integrand = [&](double z) {
    // cos(zs) - 1 = -2 sin^2(zs/2), avoiding cancellation for small zs.
    const double h = std::sin(0.5 * z * s);
    return -2.0 * h * h * std::pow(z, -1.0 - p.alpha);
  };
  double lo = p.lower;
  double total = 0.0;
  if (lo == 0.0) {
    // Series on [0, delta] with delta s <= 1/2.
    const double delta = std::min(p.upper, 0.5 / s);
    double term_sign = -1.0, fact = 1.0, series = 0.0;
    for (int j = 1; j <= 30; ++j) {
      fact *= (2.0 * j - 1.0) * (2.0 * j);
      const double term = term_sign * std::pow(s, 2.0 * j) * std::pow(delta, 2.0 * j - p.alpha) / (fact * (2.0 * j - p.alpha));
      series += term;
      if (std::abs(term) <= 1e-18 * std::abs(series)) break;
      term_sign = -term_sign;
    }
    total += 2.0 * p.scale * series;
    lo = delta;
  }
  if (lo < p.upper) {
    auto integrate = [&](int refine) {
      double acc = 0.0;
      double a = lo;
      while (a < p.upper) {
        const double b = std::min(p.upper, 2.0 * a);
        const int pieces = refine * std::max(1, static_cast<int>(std::ceil((b - a) * s / 2.0)));
        const double w = (b - a) / pieces;
        for (int i = 0; i < pieces; ++i)
          acc += boost::math::quadrature::gauss<double, 16>::integrate(integrand, a + i * w, a + (i + 1) * w);
        a = b;
      }
      return acc;
    };
    double prev = integrate(1);
    for (int refine = 2; refine <= 64; refine *= 2) {
      const double next = integrate(refine);
      const bool done = std::abs(next - prev) <= 1e-14 * (1.0 + std::abs(next));
      prev = next;
      if (done) break;
    }
    total += 2.0 * p.scale * prev;
  }
  return total;
}

}  // namespace eddy
