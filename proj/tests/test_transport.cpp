#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "eddy/transport/experiment.hpp"
#include "support.hpp"

using namespace eddy;
using eddy::testing::random_unit_field;
using TestFn = std::function<double(const Point&)>;

namespace {

TestFn basis_fn(ModeIndex l) {
  return [l](const Point& x) { return eval_basis(l, x); };
}

double pair_after(const SpectralField& xi0, std::span<const JumpEvent> events, const NoiseCoefficients& theta,
                  const ModeIndex& l, double t, int grid) {
  return transport_characteristics([&](const Point& y) { return xi0.evaluate(y); }, events, theta, basis_fn(l), t, grid);
}

}  // namespace

TEST(Characteristics, NoEventsIsInitialPairing) {
  const auto theta = make_theta(2, 0.1);
  const SpectralField xi0 = SpectralField::mode(2, ModeIndex(1, 0)) + SpectralField::mode(2, ModeIndex(1, 1), 0.5);
  const std::vector<JumpEvent> none;
  EXPECT_NEAR(pair_after(xi0, none, theta, ModeIndex(1, 0), 0.3, 32), 1.0, 1e-14);
  EXPECT_NEAR(pair_after(xi0, none, theta, ModeIndex(1, 1), 0.3, 32), 0.5, 1e-14);
  EXPECT_NEAR(pair_after(xi0, none, theta, ModeIndex(0, 1), 0.3, 32), 0.0, 1e-14);
}

TEST(Characteristics, SingleEventAgainstFineGrid) {
  const auto theta = make_theta(2, 0.1);
  for (const auto& [k, l, z] : {std::tuple{ModeIndex(1, 0), ModeIndex(1, 1), 0.5}, std::tuple{ModeIndex(-1, 1), ModeIndex(0, 1), -0.5},
                                std::tuple{ModeIndex(2, 0), ModeIndex(-1, 2), 0.5}}) {
    const std::vector<JumpEvent> events{{0.1, k, z}};
    const double w = z * theta.value(k);
    const SigmaField sigma = sigma_field(k);
    // Fine-grid reference for int e_l(y) e_l(y - w sigma_k(y)) dy.
    const int m = 512;
    double ref = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const Point y{static_cast<double>(i) / m, static_cast<double>(j) / m};
        const Vec2 s = sigma(y);
        ref += eval_basis(l, y) * eval_basis(l, {y[0] - w * s[0], y[1] - w * s[1]});
      }
    ref /= static_cast<double>(m) * m;
    const SpectralField xi0 = SpectralField::mode(3, l);
    EXPECT_NEAR(pair_after(xi0, events, theta, l, 0.2, 96), ref, 1e-12) << k.to_string();
    // Before the event nothing has moved.
    EXPECT_NEAR(pair_after(xi0, events, theta, l, 0.05, 96), 1.0, 1e-14);
  }
}

TEST(Characteristics, PushforwardPreservesL2Norm) {
  // Few, mild shears: many composed shears stretch X_t enough that a uniform
  // grid no longer resolves g(X_t y).
  const auto theta = make_theta(2, 0.1);
  const auto events = sample_jumps(LevyMeasure::two_atom(0.5), theta, 0.3, 0.1, 7);
  ASSERT_GT(events.size(), 1u);
  const SpectralField xi0 = SpectralField::mode(2, ModeIndex(1, 0)) + SpectralField::mode(2, ModeIndex(1, 1));
  // Measure preservation: int g(X_t y) dy = int g for g = xi0^2.
  ParticleCloud cloud(128);
  const std::vector<double> ones(cloud.points().size(), 1.0);
  auto sq = [&](const Point& x) { return xi0.evaluate(x) * xi0.evaluate(x); };
  const double before = cloud.pair(ones, sq);
  for (const auto& ev : events) cloud.push(JumpFlowMap(ev.mode, ev.size * theta.value(ev.mode), FlowSign::transport));
  EXPECT_NEAR(before, 2.0, 1e-13);
  EXPECT_NEAR(cloud.pair(ones, sq), before, 1e-10);
  EXPECT_EQ(cloud.points().size(), 128u * 128u);
  EXPECT_DOUBLE_EQ(cloud.weight() * static_cast<double>(cloud.points().size()), 1.0);
}

TEST(Characteristics, RejectsUnsortedAndForeignModes) {
  const auto theta = make_theta(1, 0.1);
  const SpectralField xi0 = SpectralField::mode(1, ModeIndex(1, 0));
  const std::vector<JumpEvent> unsorted{{0.2, ModeIndex(1, 0), 0.5}, {0.1, ModeIndex(0, 1), 0.5}};
  EXPECT_THROW(pair_after(xi0, unsorted, theta, ModeIndex(1, 0), 0.3, 8), std::invalid_argument);
  const std::vector<JumpEvent> foreign{{0.1, ModeIndex(2, 0), 0.5}};
  EXPECT_THROW(pair_after(xi0, foreign, theta, ModeIndex(1, 0), 0.3, 8), std::invalid_argument);
}

TEST(Heat, Examples) {
  const SpectralField e10 = SpectralField::mode(2, ModeIndex(1, 0));
  EXPECT_NEAR(heat_reference(e10, 1.0 / 16.0, 1.0).coeff(ModeIndex(1, 0)), std::exp(-std::numbers::pi * std::numbers::pi / 4.0),
              1e-15);
  std::mt19937_64 rng(5);
  const SpectralField f = random_unit_field(3, rng);
  EXPECT_EQ((heat_reference(f, 0.3, 0.0) - f).l2_norm(), 0.0);
  double prev = f.l2_norm();
  for (double t = 0.05; t < 1.0; t += 0.05) {
    const double now = heat_reference(f, 0.1, t).l2_norm();
    EXPECT_LE(now, prev);
    prev = now;
  }
  EXPECT_THROW(heat_reference(f, -1.0, 0.1), std::invalid_argument);
}

TEST(Galerkin, NoEventsZeroDriftIsConstant) {
  const auto theta = make_theta(2, 0.1);
  const NoiseOperators ops(theta, 4);
  std::mt19937_64 rng(6);
  const SpectralField f = random_unit_field(4, rng);
  const auto traj = transport_galerkin(f, {}, ops, CorrectorOperator::zero(4), 0.5, 0.1);
  ASSERT_EQ(traj.states.size(), 6u);
  for (const auto& s : traj.states) EXPECT_EQ((s - f).l2_norm(), 0.0);
  EXPECT_DOUBLE_EQ(traj.times.back(), 0.5);
}

TEST(Galerkin, JumpsPreserveNormAndDriftDissipates) {
  const auto theta = make_theta(4, 0.1);
  const LevyMeasure nu(TruncatedPowerLaw{1.0, 0.5});
  const double eps = 0.2;
  const NoiseOperators ops(theta, 8);
  const auto B = corrector_operator(ops, restrict_below(nu, eps));
  const TransportGalerkin solver(ops, B);
  const auto events = sample_jumps(nu, theta, 0.5, eps, 3);
  ASSERT_GT(events.size(), 5u);
  std::mt19937_64 rng(7);
  SpectralField xi = random_unit_field(8, rng);
  for (const auto& ev : events) {
    const double before = xi.l2_norm();
    solver.jump(xi, ev);
    EXPECT_NEAR(xi.l2_norm(), before, 1e-13 * before);
  }
  const auto traj = solver.run(random_unit_field(8, rng), events, uniform_checkpoints(0.5, 20), 0.01);
  for (std::size_t i = 1; i < traj.states.size(); ++i)
    EXPECT_LE(traj.states[i].l2_norm(), traj.states[i - 1].l2_norm() * (1.0 + 1e-13));
  EXPECT_LT(traj.states.back().l2_norm(), 1.0);
}

TEST(Galerkin, ForeignModeRejected) {
  const NoiseOperators ops(make_theta(1, 0.1), 2);
  const TransportGalerkin solver(ops, CorrectorOperator::zero(2));
  SpectralField xi(2);
  EXPECT_THROW(solver.jump(xi, {0.1, ModeIndex(2, 0), 0.5}), std::out_of_range);
}

TEST(Galerkin, ExactAndRk4DriftAgree) {
  const auto theta = make_theta(3, 0.1);
  const NoiseOperators ops(theta, 6);
  const auto B = corrector_operator(ops, LevyMeasure::two_atom(0.5));
  std::mt19937_64 rng(8);
  const SpectralField f = random_unit_field(6, rng);
  const auto cps = uniform_checkpoints(0.3, 3);
  const auto exact = TransportGalerkin(ops, B, LinearIntegrator::exact).run(f, {}, cps, 0.01);
  auto err = [&](double dt) {
    const auto b = TransportGalerkin(ops, B, LinearIntegrator::rk4).run(f, {}, cps, dt);
    return (exact.states.back() - b.states.back()).l2_norm();
  };
  const double e2 = err(0.002), e1 = err(0.001);
  EXPECT_GT(e2 / e1, 12.0);
  EXPECT_LT(e2 / e1, 20.0);
  EXPECT_LT(e1, 1e-10);
}

TEST(Galerkin, WeakFormResidual) {
  // <xi(t), phi> - <xi0, phi> - int_0^t <B xi(s), phi> ds, the integral by
  // composite Simpson on the recorded trajectory.
  const auto theta = make_theta(2, 0.1);
  const NoiseOperators ops(theta, 4);
  const auto B = corrector_operator(ops, LevyMeasure::two_atom(0.5));
  std::mt19937_64 rng(9);
  const SpectralField f = random_unit_field(4, rng);
  const int steps = 200;
  const double T = 0.4;
  const auto traj = transport_galerkin(f, {}, ops, B, T, T / steps);
  for (const auto& l : {ModeIndex(1, 0), ModeIndex(1, 1), ModeIndex(-2, 1)}) {
    double integral = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      integral += wgt * B.apply(traj.states[i]).coeff(l);
    }
    integral *= (T / steps) / 3.0;
    const double residual = traj.states.back().coeff(l) - f.coeff(l) - integral;
    EXPECT_LT(std::abs(residual), 1e-9) << l.to_string();
  }
}

TEST(Galerkin, FirstShellDecayApproachesHeatRate) {
  // Rate of the e_(1,0) coefficient at t = 0 is -<e, B e>; compare to 4 pi^2 kappa.
  const auto nu = LevyMeasure::two_atom(0.5);
  const double kappa = eddy_viscosity(nu);
  const double heat_rate = kappa * kTwoPi * kTwoPi;
  const ModeIndex l(1, 0);
  double prev = INFINITY;
  for (int n : {2, 4, 8}) {
    const auto B = corrector_operator(make_theta(n, 0.1), nu, n);
    const SpectralField e = SpectralField::mode(n, l);
    const double rate = -inner(e, B.apply(e));
    const double gap = std::abs(rate - heat_rate);
    EXPECT_LE(gap, corrector_vs_laplacian(B, kappa, e) + 1e-14);
    EXPECT_LT(gap, prev) << n;
    prev = gap;
    // The trajectory shows the same initial slope.
    const NoiseOperators ops(make_theta(n, 0.1), n);
    const double h = 1e-5;
    const auto traj = TransportGalerkin(ops, B).run(e, {}, std::vector<double>{h}, h);
    EXPECT_NEAR((1.0 - traj.states[0].coeff(l)) / h, rate, 1e-3 * rate);
  }
}

TEST(Agreement, CharacteristicsAndGalerkin) {
  // Two-atom nu with eps below the atoms: every jump is an event and the
  // residual drift vanishes, so both solvers integrate the same dynamics.
  const auto nu = LevyMeasure::two_atom(0.5);
  const auto theta = make_theta(2, 0.1);
  const auto events = sample_jumps(nu, theta, 0.2, 0.1, 21);
  ASSERT_GT(events.size(), 0u);
  const SpectralField xi0 = SpectralField::mode(2, ModeIndex(1, 0)) + SpectralField::mode(2, ModeIndex(1, 1));
  const std::vector<ModeIndex> tests{ModeIndex(1, 0), ModeIndex(1, 1), ModeIndex(0, 1)};
  auto gap = [&](int n_gal, int grid) {
    const NoiseOperators ops(theta, n_gal);
    const auto traj = TransportGalerkin(ops, CorrectorOperator::zero(n_gal)).run(project(xi0, n_gal), events, std::vector<double>{0.2}, 0.01);
    double worst = 0.0;
    for (const auto& l : tests)
      worst = std::max(worst, std::abs(traj.states[0].coeff(l) - pair_after(xi0, events, theta, l, 0.2, grid)));
    return worst;
  };
  const double coarse = gap(6, 24);
  const double fine = gap(12, 48);
  const double finer = gap(24, 96);
  EXPECT_LE(fine, coarse);
  EXPECT_LE(finer, fine + 1e-14);
  EXPECT_LT(finer, 1e-10);
}

namespace {

LimitSettings small_settings() {
  LimitSettings s;
  s.n_list = {2, 4};
  s.initial = {{ModeIndex(1, 0), 1.0}, {ModeIndex(1, 1), 1.0}};
  s.tests = {ModeIndex(1, 0), ModeIndex(1, 1)};
  s.M = 6;
  s.grid = 32;
  s.checkpoints = 4;
  s.T = 0.2;
  return s;
}

}  // namespace

TEST(LimitExperiment, ZeroInitialConditionGivesZeroError) {
  LimitSettings s = small_settings();
  s.n_list = {1};
  s.M = 1;
  s.initial = {{ModeIndex(1, 0), 0.0}};
  const auto rows = transport_limit_experiment(s);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].D, 0.0);
  EXPECT_EQ(rows[0].M, 1u);
}

TEST(LimitExperiment, WorkerCountDoesNotChangeResults) {
  LimitSettings s = small_settings();
  const auto one = transport_limit_experiment(s);
  s.workers = 3;
  const auto three = transport_limit_experiment(s);
  ASSERT_EQ(one.size(), three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].D, three[i].D);
    EXPECT_EQ(one[i].stderr_D, three[i].stderr_D);
    EXPECT_EQ(one[i].final_variance, three[i].final_variance);
  }
}

TEST(LimitExperiment, GalerkinSolverAgreesWithCharacteristics) {
  // Both resolutions doubled: the gap between the solvers shrinks.
  auto gap = [](int grid, int n_gal) {
    LimitSettings s = small_settings();
    s.grid = grid;
    const auto chars = transport_limit_experiment(s);
    s.solver = TransportSolver::galerkin;
    s.n_gal = n_gal;
    const auto gal = transport_limit_experiment(s);
    double worst = 0.0;
    for (std::size_t i = 0; i < chars.size(); ++i) worst = std::max(worst, std::abs(chars[i].D - gal[i].D));
    return worst;
  };
  const double coarse = gap(64, 16);
  const double fine = gap(128, 32);
  EXPECT_LT(fine, coarse);
  EXPECT_LT(fine, 1e-3);
}

TEST(LimitExperiment, Validation) {
  LimitSettings s = small_settings();
  s.T = -1.0;
  EXPECT_THROW(transport_limit_experiment(s), std::invalid_argument);
  s = small_settings();
  s.n_list = {4, 2};
  EXPECT_THROW(transport_limit_experiment(s), std::invalid_argument);
  s = small_settings();
  s.sample_events = false;
  EXPECT_THROW(transport_limit_experiment(s), std::invalid_argument);
}
