#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <map>

#include "eddy/levy/measure.hpp"
#include "eddy/levy/rng.hpp"
#include "eddy/levy/sampler.hpp"
#include "eddy/levy/theta.hpp"

using namespace eddy;

namespace {

double power_law_quadrature(double alpha, double c, double lo, double hi, double p) {
  // 2 c int_lo^hi z^{p-1-alpha} dz; tanh-sinh copes with the endpoint singularity.
  auto f = [&](double z) { return z > 0.0 ? std::pow(z, p - 1.0 - alpha) : 0.0; };
  boost::math::quadrature::tanh_sinh<double> ts;
  return 2.0 * c * ts.integrate(f, lo, hi);
}

}  // namespace

TEST(MakeTheta, UnitShell) {
  const auto theta = make_theta(1, 0.3);
  ASSERT_EQ(theta.size(), 4u);
  for (const auto& e : theta.support()) EXPECT_DOUBLE_EQ(e.value, 0.5);
}

TEST(MakeTheta, SecondCutoffOracle) {
  const auto theta = make_theta(2, 0.5);
  // Shells |k|^2 = 1, 2, 4 with four modes each; squared weights |k|^{-1}.
  const double norm = std::sqrt(4.0 * (1.0 + std::pow(2.0, -0.5) + 0.5));
  EXPECT_EQ(theta.size(), 12u);
  EXPECT_NEAR(theta.linf(), 1.0 / norm, 1e-15);
  EXPECT_NEAR(theta.value(ModeIndex(2, 0)), std::pow(2.0, -0.5) / norm, 1e-15);
  EXPECT_LT(theta.linf(), make_theta(1, 0.5).linf());
  EXPECT_EQ(theta.value(ModeIndex(1, 0)), theta.value(ModeIndex(0, -1)));
}

TEST(MakeTheta, HypothesesHoldAcrossCutoffs) {
  for (double a : {0.1, 0.5, 0.9}) {
    double prev = INFINITY;
    for (int n = 1; n <= 16; ++n) {
      const auto theta = make_theta(n, a);
      EXPECT_TRUE(theta.is_radial());
      EXPECT_NEAR(theta.l2_norm(), 1.0, 1e-14);
      for (const auto& e : theta.support()) EXPECT_EQ(e.value, theta.value(-e.mode));
      EXPECT_LT(theta.linf(), prev);
      prev = theta.linf();
    }
  }
}

TEST(MakeTheta, RejectsBadArguments) {
  EXPECT_THROW(make_theta(0, 0.5), std::invalid_argument);
  EXPECT_THROW(make_theta(3, 1.0), std::invalid_argument);
  EXPECT_THROW(make_theta(3, 0.0), std::invalid_argument);
}

TEST(NoiseCoefficientsTest, Validation) {
  EXPECT_THROW(NoiseCoefficients({}), std::invalid_argument);
  EXPECT_THROW(NoiseCoefficients({{ModeIndex(1, 0), 0.5}, {ModeIndex(-1, 0), 0.4}}), std::invalid_argument);
  EXPECT_THROW(NoiseCoefficients({{ModeIndex(1, 0), 0.5}}), std::invalid_argument);
  EXPECT_THROW(NoiseCoefficients({{ModeIndex(1, 0), -0.5}, {ModeIndex(-1, 0), -0.5}}), std::invalid_argument);
  EXPECT_THROW(NoiseCoefficients({{ModeIndex(1, 0), 0.5}, {ModeIndex(1, 0), 0.5}, {ModeIndex(-1, 0), 0.5}}),
               std::invalid_argument);
}

TEST(LevyMeasureTest, Validation) {
  EXPECT_THROW(LevyMeasure(DiscreteAtoms{{{0.5, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure(DiscreteAtoms{{{0.5, 1.0}, {-0.5, 0.5}}}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure(DiscreteAtoms{{{0.0, 1.0}}}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure::two_atom(1.5), std::invalid_argument);
  EXPECT_THROW(LevyMeasure(TruncatedPowerLaw{2.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure(TruncatedPowerLaw{1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(LevyMeasure(TruncatedPowerLaw{1.0, 1.0, 0.5, 0.4}), std::invalid_argument);
  EXPECT_NO_THROW(LevyMeasure(TruncatedPowerLaw{1.5, 2.0}));
}

TEST(Moments, TwoAtomMeasure) {
  const auto nu = LevyMeasure::two_atom(0.5);
  EXPECT_EQ(second_moment(nu), 0.25);
  EXPECT_EQ(eddy_viscosity(nu), 1.0 / 16.0);
  EXPECT_EQ(jump_intensity(nu, 0.1), 1.0);
  EXPECT_EQ(jump_intensity(nu, 0.6), 0.0);
}

TEST(Moments, PowerLawAgainstQuadrature) {
  const LevyMeasure nu(TruncatedPowerLaw{1.0, 1.0});
  EXPECT_NEAR(second_moment(nu), 2.0, 1e-15);
  EXPECT_NEAR(second_moment(nu), power_law_quadrature(1.0, 1.0, 0.0, 1.0, 2.0), 1e-12);
  for (double alpha : {0.3, 1.0, 1.7}) {
    const LevyMeasure m(TruncatedPowerLaw{alpha, 0.7});
    EXPECT_NEAR(second_moment(m), power_law_quadrature(alpha, 0.7, 0.0, 1.0, 2.0), 1e-10);
    EXPECT_NEAR(absolute_moment(m, 4.0), power_law_quadrature(alpha, 0.7, 0.0, 1.0, 4.0), 1e-12);
    EXPECT_NEAR(jump_intensity(m, 0.05), power_law_quadrature(alpha, 0.7, 0.05, 1.0, 0.0), 1e-9);
  }
}

TEST(Moments, TruncationErrorBound) {
  EXPECT_EQ(truncation_error_bound(LevyMeasure::two_atom(0.5), 0.1), 0.0);
  const LevyMeasure nu(TruncatedPowerLaw{1.0, 1.0});
  for (double eps : {0.01, 0.1, 0.5}) {
    EXPECT_NEAR(truncation_error_bound(nu, eps), 2.0 * eps, 1e-15);
    EXPECT_NEAR(truncation_error_bound(nu, eps), power_law_quadrature(1.0, 1.0, 0.0, eps, 2.0), 1e-12);
  }
  EXPECT_NEAR(truncation_error_bound(nu, 1.0), second_moment(nu), 1e-15);
  EXPECT_EQ(truncation_error_bound(LevyMeasure::two_atom(0.5), 1.0), 0.25);
}

TEST(Moments, CosineTransformAgainstQuadrature) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const LevyMeasure nu(TruncatedPowerLaw{alpha, 1.3});
    for (double s : {0.01, 0.7, 5.0, 40.0, 300.0}) {
      boost::math::quadrature::tanh_sinh<double> ts;
      const double oracle = 2.0 * 1.3 * ts.integrate([&](double z) {
        if (z <= 0.0) return 0.0;
        const double h = std::sin(0.5 * z * s) / z;
        return -2.0 * h * h * std::pow(z, 1.0 - alpha);
      }, 0.0, 1.0);
      EXPECT_NEAR(cosine_transform(nu, s), oracle, 1e-9 * (1.0 + std::abs(oracle))) << alpha << " " << s;
    }
  }
  const auto atoms = LevyMeasure::two_atom(0.5);
  EXPECT_NEAR(cosine_transform(atoms, 3.0), std::cos(1.5) - 1.0, 1e-15);
}

TEST(CounterStreamTest, DeterministicAndKeyed) {
  CounterStream a(1, 2, ModeIndex(1, 0)), b(1, 2, ModeIndex(1, 0)), c(1, 3, ModeIndex(1, 0)), d(1, 2, ModeIndex(0, 1));
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
    EXPECT_NE(x, c.uniform());
    EXPECT_NE(x, d.uniform());
  }
}

TEST(Sampler, MeanCountAndOrdering) {
  const auto nu = LevyMeasure::two_atom(0.5);
  const auto theta = make_theta(2, 0.5);
  const double T = 3.0;
  double total = 0.0;
  const int paths = 2000;
  for (int p = 0; p < paths; ++p) {
    const auto events = sample_jumps(nu, theta, T, 0.1, 42, static_cast<std::uint64_t>(p));
    for (std::size_t i = 1; i < events.size(); ++i) EXPECT_LE(events[i - 1].time, events[i].time);
    for (const auto& e : events) {
      EXPECT_GT(e.time, 0.0);
      EXPECT_LE(e.time, T);
      EXPECT_EQ(std::abs(e.size), 0.5);
    }
    total += static_cast<double>(events.size());
  }
  // Mean events per mode is lambda T = T; standard error sqrt(T / (paths * modes)).
  const double mean = total / (paths * static_cast<double>(theta.size()));
  EXPECT_NEAR(mean, T, 4.0 * std::sqrt(T / (paths * static_cast<double>(theta.size()))));
}

TEST(Sampler, EmptyRestrictionAndDeterminism) {
  const auto nu = LevyMeasure::two_atom(0.5);
  const auto theta = make_theta(3, 0.5);
  EXPECT_TRUE(sample_jumps(nu, theta, 10.0, 0.6, 1).empty());
  const auto a = sample_jumps(nu, theta, 2.0, 0.1, 9, 4);
  const auto b = sample_jumps(nu, theta, 2.0, 0.1, 9, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].time, b[i].time);
    EXPECT_EQ(a[i].mode, b[i].mode);
    EXPECT_EQ(a[i].size, b[i].size);
  }
  EXPECT_THROW(sample_jumps(nu, theta, 1.0, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(sample_jumps(nu, theta, 1.0, 1.0, 1), std::invalid_argument);
}

TEST(Sampler, CommonRandomNumbersAcrossCutoffs) {
  // A mode present for two cutoffs sees the same events for the same (seed, path).
  const auto nu = LevyMeasure::two_atom(0.5);
  const auto small = sample_mode_jumps(nu, ModeIndex(1, 0), 2.0, 0.1, 5, 3);
  auto big = sample_jumps(nu, make_theta(4, 0.5), 2.0, 0.1, 5, 3);
  std::erase_if(big, [](const JumpEvent& e) { return !(e.mode == ModeIndex(1, 0)); });
  ASSERT_EQ(small.size(), big.size());
  for (std::size_t i = 0; i < small.size(); ++i) EXPECT_EQ(small[i].time, big[i].time);
}

TEST(Sampler, PoissonCountsChiSquare) {
  // 10^4 paths of one mode with lambda T = 2; bins 0..6 and >= 7 (7 degrees of
  // freedom). The 1% critical value of chi-square(7) is 18.475.
  const auto nu = LevyMeasure::two_atom(0.5);
  const int paths = 10000;
  std::vector<int> counts(8, 0);
  for (int p = 0; p < paths; ++p) {
    const auto ev = sample_mode_jumps(nu, ModeIndex(1, 1), 2.0, 0.1, 2024, static_cast<std::uint64_t>(p));
    ++counts[std::min<std::size_t>(ev.size(), 7)];
  }
  double chi2 = 0.0, tail = 1.0;
  for (int k = 0; k < 8; ++k) {
    double prob;
    if (k < 7) {
      prob = std::exp(-2.0) * std::pow(2.0, k) / std::tgamma(k + 1.0);
      tail -= prob;
    } else {
      prob = tail;
    }
    const double expected = paths * prob;
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  EXPECT_LT(chi2, 18.475);
}

TEST(Sampler, PowerLawSizeMoments) {
  const LevyMeasure nu(TruncatedPowerLaw{1.0, 1.0});
  const double eps = 0.01;
  // Enough horizon for ~10^5 samples of one mode: lambda_eps = 2 (1/eps - 1) = 198.
  const auto ev = sample_mode_jumps(nu, ModeIndex(1, 0), 520.0, eps, 77, 0);
  ASSERT_GT(ev.size(), 100000u);
  double m1 = 0.0, m2 = 0.0, m2sq = 0.0;
  for (const auto& e : ev) {
    EXPECT_GE(std::abs(e.size), eps);
    EXPECT_LE(std::abs(e.size), 1.0);
    m1 += e.size;
    m2 += e.size * e.size;
  }
  const double N = static_cast<double>(ev.size());
  m1 /= N;
  m2 /= N;
  for (const auto& e : ev) m2sq += e.size * e.size * e.size * e.size;
  const double cond = second_moment(restrict_above(nu, eps)) / jump_intensity(nu, eps);
  EXPECT_NEAR(m2, cond, 0.02 * cond);
  // Symmetry: the sample mean is within 3 standard errors of 0.
  EXPECT_LT(std::abs(m1), 3.0 * std::sqrt(m2 / N));
}
