#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "csdelay.hpp"
#include "support.hpp"

using namespace csdelay;
using csdelay::testkit::two_agent_constant;

// Weights -----------------------------------------------------------------

TEST(Weights, ClassicalConstantPair) {
  const std::vector<double> x{0.0, 3.0};
  const auto w = weight_matrix(x, 2, 1, InfluenceSpec::constant(1.0), WeightScheme::classical());
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(w(i, j), 0.5);
}

TEST(Weights, NormalizedCoincidentIsUniform) {
  const std::vector<double> x{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const auto w =
      weight_matrix(x, 3, 2, InfluenceSpec::inverse_power(1.0), WeightScheme::normalized());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(w(i, j), 1.0 / 3.0);
}

TEST(Weights, NormalizedIsNonsymmetric) {
  const std::vector<double> x{0.0, 1.0, 10.0};
  const auto w =
      weight_matrix(x, 3, 1, InfluenceSpec::inverse_power(1.0), WeightScheme::normalized());
  const double w01 = 0.5 / (1.0 + 0.5 + 1.0 / 101.0);
  const double w10 = 0.5 / (0.5 + 1.0 + 1.0 / 82.0);
  EXPECT_NEAR(w(0, 1), w01, 1e-16);
  EXPECT_NEAR(w(1, 0), w10, 1e-16);
  EXPECT_NE(w(0, 1), w(1, 0));
}

TEST(Weights, ZeroDenominatorIsDetected) {
  const std::vector<double> x{0.0, 5.0};
  const auto psi = InfluenceSpec::table({{0.0, 0.0}, {1.0, 0.0}});
  EXPECT_THROW(weight_matrix(x, 2, 1, psi, WeightScheme::normalized()), DegenerateWeightsError);
}

TEST(Weights, ConstantCouplingRowSums) {
  EXPECT_TRUE(WeightScheme::constant_coupling(0.5).row_sums_bounded(3));
  EXPECT_FALSE(WeightScheme::constant_coupling(1.0).row_sums_bounded(3));
  EXPECT_TRUE(WeightScheme::constant_coupling(1.0).row_sums_bounded(2));
}

// Right-hand side ---------------------------------------------------------

TEST(Rhs, EqualDelayedVelocitiesGiveZero) {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.dim = 2;
  cfg.initial = ConstantHistory{{0, 0, 1, 2, -3, 0.5}, {0.3, -0.2, 0.3, -0.2, 0.3, -0.2}};
  const auto hist = build_initial_history(cfg);
  const auto a = rhs(hist, 0.0, cfg.influence, cfg.scheme);
  for (double c : a) EXPECT_EQ(c, 0.0);
}

TEST(Rhs, ConstantCouplingPairReducesToScalarDelayEquation) {
  const double v1 = 0.7, v2 = -0.4;
  auto cfg = two_agent_constant(0.1, {0.0, 1.0}, {v1, v2});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  const auto hist = build_initial_history(cfg);
  const auto a = rhs(hist, 0.0, cfg.influence, cfg.scheme);
  EXPECT_DOUBLE_EQ(a[0], v2 - v1);
  EXPECT_DOUBLE_EQ(a[1], v1 - v2);
  EXPECT_DOUBLE_EQ(a[0] - a[1], -2.0 * (v1 - v2));
}

TEST(Rhs, ClassicalConstantPair) {
  const auto cfg = two_agent_constant(0.1, {0.0, 1.0}, {1.0, 0.0});
  const auto hist = build_initial_history(cfg);
  const auto a = rhs(hist, 0.05, cfg.influence, cfg.scheme);
  EXPECT_EQ(a[0], -0.5);
  EXPECT_EQ(a[1], 0.5);
}

TEST(Rhs, NeedsDelayedCoverage) {
  const auto cfg = two_agent_constant(0.1, {0.0, 1.0}, {1.0, 0.0});
  const auto hist = build_initial_history(cfg);
  EXPECT_THROW(rhs(hist, 0.2, cfg.influence, cfg.scheme), CoverageError);
}

// Integration -------------------------------------------------------------

TEST(Integrate, EqualVelocitiesTranslate) {
  auto cfg = two_agent_constant(0.1, {0.0, 2.0}, {0.5, 0.5});
  cfg.horizon = 1.0;
  const auto traj = integrate(cfg);
  ASSERT_FALSE(traj.diverged);
  for (std::size_t r = 0; r < traj.frames.size(); ++r) {
    const auto& f = traj.frames[r];
    EXPECT_EQ(f.velocities[0], 0.5);
    EXPECT_EQ(f.velocities[1], 0.5);
    if (f.t >= 0.0) EXPECT_NEAR(f.positions[0], 0.5 * f.t, 1e-14);
    EXPECT_EQ(traj.diagnostics[r].d_v, 0.0);
  }
}

TEST(Integrate, FirstIntervalIsExactForConstantPast) {
  // On [0, tau] the force sees only the constant past: v_1(t) = v_1 - (v_1 - v_2) t / 2.
  auto cfg = two_agent_constant(0.2, {0.0, 0.0}, {1.0, 0.0});
  cfg.horizon = 0.4;
  const auto traj = integrate(cfg);
  const auto& f = traj.frames[static_cast<std::size_t>(2 * cfg.steps_per_delay)];
  EXPECT_NEAR(f.t, 0.2, 1e-15);
  EXPECT_NEAR(f.velocities[0], 1.0 - 0.1, 1e-14);
  EXPECT_NEAR(f.positions[0], 0.2 - 0.25 * 0.04, 1e-14);
}

TEST(Integrate, ScalarDelayEquationMatchesStepSolution) {
  // w' = -2 w(t - tau), w = 1 on [-tau, 0]: w = 1 - 2t on [0, tau] and
  // w = 1 - 2t + 2 (t - tau)^2 on [tau, 2 tau].
  const double tau = 0.3;
  auto cfg = two_agent_constant(tau, {0.0, 0.0}, {1.0, 0.0});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.horizon = 2.0 * tau;
  const auto traj = integrate(cfg);
  for (const auto& f : traj.frames) {
    if (f.t < 0.0) continue;
    const double t = f.t;
    const double exact = t <= tau ? 1.0 - 2.0 * t : 1.0 - 2.0 * t + 2.0 * (t - tau) * (t - tau);
    EXPECT_NEAR(f.velocities[0] - f.velocities[1], exact, 1e-13) << "t = " << t;
  }
}

TEST(Integrate, LargeDelayOscillatesWithGrowingAmplitude) {
  auto cfg = two_agent_constant(1.0, {0.0, 0.0}, {1.0, 0.0});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.horizon = 40.0;
  const auto traj = integrate(cfg);
  std::vector<double> peaks;
  for (std::size_t r = 1; r + 1 < traj.frames.size(); ++r) {
    auto w = [&](std::size_t k) {
      return std::abs(traj.frames[k].velocities[0] - traj.frames[k].velocities[1]);
    };
    if (traj.frames[r].t > 2.0 && w(r) > w(r - 1) && w(r) >= w(r + 1)) peaks.push_back(w(r));
  }
  ASSERT_GE(peaks.size(), 6u);
  for (std::size_t k = 1; k < peaks.size(); ++k) EXPECT_GT(peaks[k], peaks[k - 1]);
  EXPECT_GT(peaks.back(), 50.0);
}

TEST(Integrate, GuardTruncatesDivergentRun) {
  auto cfg = two_agent_constant(1.0, {0.0, 0.0}, {1.0, 0.0});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.horizon = 200.0;
  cfg.divergence_guard = 1e3;
  const auto traj = integrate(cfg);
  ASSERT_TRUE(traj.diverged);
  EXPECT_GT(traj.blowup_time, 0.0);
  EXPECT_LT(traj.blowup_time, 200.0);
  EXPECT_LE(traj.frames.back().t, traj.blowup_time);
  for (double v : traj.frames.back().velocities) EXPECT_TRUE(std::isfinite(v));
}

TEST(Integrate, RecordStrideAndRowCount) {
  ScenarioConfig cfg;
  cfg.agents = 10;
  cfg.dim = 2;
  cfg.tau = 0.1;
  cfg.steps_per_delay = 16;
  cfg.horizon = 1.3;
  cfg.record_stride = 3;
  cfg.initial = RandomHistory{};
  cfg.rng_seed = 11;
  const auto traj = integrate(cfg);
  // Initial rows k = -m .. 0 at stride 3 (plus k = -m), stepped rows k % 3 == 0 up to 208,
  // plus the final frame.
  const long m = 16, last = 208;
  std::size_t expected = 0;
  for (long k = -m; k <= last; ++k)
    if (k == -m || k % 3 == 0 || k == last) ++expected;
  EXPECT_EQ(traj.frames.size(), expected);
  EXPECT_NEAR(traj.frames.back().t, 1.3, 1e-12);
  EXPECT_EQ(traj.nodes.size(), static_cast<std::size_t>(last + m + 1));

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  std::size_t lines = 0;
  for (char c : csv.str()) lines += c == '\n';
  EXPECT_EQ(lines, expected + 1);
}

TEST(Integrate, CsvHeader) {
  const auto cols = trajectory_columns(2, 2);
  const std::vector<std::string> expected{"t",    "x0_0", "x0_1", "x1_0", "x1_1", "v0_0", "v0_1",
                                          "v1_0", "v1_1", "d_x",  "d_v",  "p_0",  "p_1"};
  EXPECT_EQ(cols, expected);
}
