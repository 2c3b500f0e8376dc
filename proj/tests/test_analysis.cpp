#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "csdelay.hpp"
#include "support.hpp"

using namespace csdelay;
using csdelay::testkit::two_agent_constant;

namespace {

ConditionInputs flat(double tau, double dx0 = 0.0, double dv0 = 0.0) {
  return {dx0, dv0, tau, InfluenceSpec::constant(1.0)};
}

Certificate certify(const Trajectory& traj, CertificateVariant v = CertificateVariant::General) {
  const auto d0 = initial_diameters(traj);
  auto out = find_certificate({d0.d_x, d0.d_v, traj.tau, traj.config.influence}, v);
  if (!std::holds_alternative<Certificate>(out)) throw std::runtime_error("not certified");
  return std::get<Certificate>(out);
}

}  // namespace

// Rearrangement -----------------------------------------------------------

TEST(Rearrangement, MonotoneKindsAreThemselves) {
  EXPECT_DOUBLE_EQ(rearrangement(InfluenceSpec::inverse_power(1.0), 2.0), 0.2);
  EXPECT_EQ(rearrangement(InfluenceSpec::constant(1.0), 123.0), 1.0);
}

TEST(Rearrangement, CosineTableFlattensAfterFirstTrough) {
  std::vector<InfluenceSample> samples;
  const int n = 4000;
  for (int k = 0; k <= n; ++k) {
    const double s = 8.0 * k / n;
    samples.push_back({s, 0.6 + 0.4 * std::cos(s)});
  }
  const auto psi = InfluenceSpec::table(samples);
  const double pi = std::numbers::pi;
  EXPECT_NEAR(rearrangement(psi, pi), 0.2, 1e-5);
  EXPECT_NEAR(rearrangement(psi, 2.0 * pi), 0.2, 1e-5);
  EXPECT_NEAR(psi(2.0 * pi), 1.0, 1e-5);
  EXPECT_NEAR(rearrangement(psi, 1.0), 0.6 + 0.4 * std::cos(1.0), 1e-6);
}

// Flocking condition ------------------------------------------------------

TEST(Condition, FlatInfluenceSmallRateLimit) {
  for (double tau : {0.1, 0.2, 0.3}) {
    const auto s = condition_lhs_rhs(1e-9, flat(tau), CertificateVariant::General);
    EXPECT_NEAR(s.lhs, 1.0, 1e-8);
    EXPECT_NEAR(s.rhs, 4.0 * tau, 1e-8);
  }
}

TEST(Condition, FrozenValueAtTauPointTwo) {
  // 0.8 e^{0.02} (e^{0.02} - 1) / 0.02 to 35 digits.
  const auto s = condition_lhs_rhs(0.1, flat(0.2), CertificateVariant::General);
  EXPECT_DOUBLE_EQ(s.lhs, 0.9);
  EXPECT_NEAR(s.rhs, 0.82437736662529666387603349734813235, 2e-16);
  EXPECT_TRUE(s.holds());
}

TEST(Condition, ZeroVelocityDiameterDropsOut) {
  const auto psi = InfluenceSpec::inverse_power(1.0);
  for (double C : {0.01, 0.3, 0.9}) {
    const auto s = condition_lhs_rhs(C, {1.0, 0.0, 0.1, psi}, CertificateVariant::General);
    EXPECT_DOUBLE_EQ(s.lhs, 0.5 - C);
    EXPECT_DOUBLE_EQ(s.rhs, condition_lhs_rhs(C, flat(0.1), CertificateVariant::General).rhs);
  }
}

TEST(Condition, RateOutsideUnitIntervalRejected) {
  EXPECT_THROW(condition_lhs_rhs(0.0, flat(0.1), CertificateVariant::General), ArgumentError);
  EXPECT_THROW(condition_lhs_rhs(1.0, flat(0.1), CertificateVariant::General), ArgumentError);
}

TEST(Condition, SeriesBranchIsContinuous) {
  const double below = expm1_ratio(0.99999e-4), above = expm1_ratio(1.00001e-4);
  EXPECT_NEAR(below, std::expm1(0.99999e-4) / 0.99999e-4, 1e-15);
  EXPECT_NEAR(above, std::expm1(1.00001e-4) / 1.00001e-4, 1e-15);
  EXPECT_NEAR(expm1_ratio(1e-12), 1.0 + 5e-13, 1e-15);
}

TEST(Condition, VariantsDifferOnlyInPositionBound) {
  const ConditionInputs in{0.5, 0.2, 0.1, InfluenceSpec::inverse_power(1.0)};
  EXPECT_DOUBLE_EQ(position_diameter_bound(0.5, in, CertificateVariant::General),
                   0.5 + 1.2 * (0.1 + 2.0) * 0.2);
  EXPECT_DOUBLE_EQ(position_diameter_bound(0.5, in, CertificateVariant::ConstantVelocity),
                   0.5 + 0.4);
}

// Certificate search ------------------------------------------------------

TEST(Certificate, FlatInfluenceBeyondQuarterDelayIsInfeasible) {
  for (double dv : {0.0, 0.1, 1.0}) {
    const auto out = find_certificate(flat(0.3, 0.5, dv), CertificateVariant::General);
    ASSERT_TRUE(std::holds_alternative<Infeasible>(out));
    EXPECT_LT(std::get<Infeasible>(out).best_margin, 0.0);
  }
}

TEST(Certificate, LargestRootForFlatInfluence) {
  // Largest root of 1 - C = 0.8 e^{0.2C} (e^{0.2C} - 1) / (0.2C), 35 digits.
  const double frozen = 0.16050121702933685952547766667829636;
  const auto out = find_certificate(flat(0.2), CertificateVariant::General);
  ASSERT_TRUE(std::holds_alternative<Certificate>(out));
  const auto& c = std::get<Certificate>(out);
  EXPECT_NEAR(c.rate, frozen, 2e-10 * frozen);
  EXPECT_LE(c.rate, frozen);
  EXPECT_GE(c.margin, 0.0);
  EXPECT_TRUE(c.lower_is_grid_floor);
  EXPECT_EQ(c.feasible_hi, c.rate);
}

TEST(Certificate, ZeroVelocityDiameterSmallDelay) {
  const auto out = find_certificate(flat(0.1, 3.0, 0.0), CertificateVariant::General);
  ASSERT_TRUE(std::holds_alternative<Certificate>(out));
  const auto s = condition_lhs_rhs(std::get<Certificate>(out).rate, flat(0.1, 3.0, 0.0),
                                   CertificateVariant::General);
  EXPECT_TRUE(s.holds());
}

TEST(Certificate, DisconnectedSetReportsComponent) {
  // Psi small near C -> 0 (argument d_v0 / C large) and near C -> 1 (C eats the margin),
  // so the feasible set is an interior interval.
  const ConditionInputs in{0.0, 0.05, 0.05, InfluenceSpec::inverse_power(1.0)};
  const auto out = find_certificate(in, CertificateVariant::General);
  ASSERT_TRUE(std::holds_alternative<Certificate>(out));
  const auto& c = std::get<Certificate>(out);
  EXPECT_FALSE(c.lower_is_grid_floor);
  EXPECT_GT(c.feasible_lo, 1e-3);
  EXPECT_LT(c.feasible_lo, c.feasible_hi);
  EXPECT_FALSE(condition_lhs_rhs(c.feasible_lo * 0.99, in, CertificateVariant::General).holds());
  EXPECT_FALSE(condition_lhs_rhs(c.feasible_hi * 1.01, in, CertificateVariant::General).holds());
}

// Halanay rate ------------------------------------------------------------

TEST(Halanay, SmallDelayLimit) { EXPECT_NEAR(halanay_gamma(1.0, 2.0, 1e-8), 1.0, 1e-6); }

TEST(Halanay, BracketSigns) {
  EXPECT_NEAR(halanay_residual(1e-300, 0.5, 1.0, 0.1), 0.5, 1e-12);
  EXPECT_LT(halanay_residual(0.5, 0.5, 1.0, 0.1), 0.0);
  const double g = halanay_gamma(0.5, 1.0, 0.1);
  EXPECT_GT(g, 0.0);
  EXPECT_LT(g, 0.5);
}

TEST(Halanay, FrozenRoot) {
  // Root of (0.9 - g) = 0.8 e^{0.2g} (e^{0.2g} - 1) / (0.2g), 35 digits.
  const double frozen = 0.080448615202787485474734988510946797;
  const double g = halanay_gamma(0.8, 0.9, 0.2);
  EXPECT_NEAR(g, frozen, 1e-15);
  EXPECT_LT(std::abs(halanay_residual(g, 0.8, 0.9, 0.2)), 1e-12);
}

TEST(Halanay, PreconditionsEnforced) {
  EXPECT_THROW(halanay_gamma(1.0, 1.0, 0.1), ArgumentError);
  EXPECT_THROW(halanay_gamma(0.0, 1.0, 0.1), ArgumentError);
  EXPECT_THROW(halanay_gamma(0.5, 1.0, 0.0), ArgumentError);
}

// Monitors ----------------------------------------------------------------

TEST(Monitors, ZeroSpreadPassesEverything) {
  auto cfg = two_agent_constant(0.1, {0.0, 1.0}, {0.3, 0.3});
  cfg.horizon = 3.0;
  const auto traj = integrate(cfg);
  const auto cert = certify(traj);
  EXPECT_TRUE(monitor_envelope(traj, cert).pass);
  EXPECT_TRUE(monitor_startup_bound(traj).pass);
  const auto ineq = monitor_dv_inequality(traj, 0.2, 2.5);
  EXPECT_TRUE(ineq.pass);
  EXPECT_EQ(ineq.worst_violation, 0.0);
  EXPECT_EQ(classify_flocking(traj, flocking_thresholds(cert)), FlockingVerdict::Flocking);
}

TEST(Monitors, FlatInfluenceRandomVelocities) {
  ScenarioConfig cfg;
  cfg.agents = 6;
  cfg.dim = 2;
  cfg.tau = 0.1;
  cfg.initial = RandomHistory{1.0, 0.5};
  cfg.rng_seed = 3;
  const auto hist = build_initial_history(cfg);
  const auto d0 = initial_diameters(hist);
  const auto cert = std::get<Certificate>(
      find_certificate({d0.d_x, d0.d_v, cfg.tau, cfg.influence}, CertificateVariant::General));
  cfg.horizon = 20.0 * cfg.tau + 10.0 / cert.rate;
  const auto traj = integrate(cfg, hist);
  const auto env = monitor_envelope(traj, cert);
  EXPECT_TRUE(env.pass) << env.worst_violation;
  EXPECT_GT(env.checked, 100u);
  EXPECT_EQ(classify_flocking(traj, flocking_thresholds(cert)), FlockingVerdict::Flocking);
}

TEST(Monitors, InflatedRateFailsEnvelope) {
  // Slow decay: weak influence at distance, so d_v lingers well above e^{-2t}.
  auto cfg = two_agent_constant(0.05, {0.0, 0.5}, {0.02, -0.02}, InfluenceSpec::inverse_power(1.0));
  cfg.horizon = 10.0;
  const auto traj = integrate(cfg);
  auto cert = certify(traj);
  EXPECT_TRUE(monitor_envelope(traj, cert).pass);
  EXPECT_FALSE(monitor_envelope(traj, cert, 2.0 / cert.rate).pass);
}

TEST(Monitors, MismatchedCertificateRejected) {
  auto cfg = two_agent_constant(0.05, {0.0, 1.0}, {0.02, -0.02});
  const auto traj = integrate(cfg);
  auto cert = certify(traj);
  cert.inputs.d_v0 *= 2.0;
  EXPECT_THROW(monitor_envelope(traj, cert), ArgumentError);
}

TEST(Monitors, StartupBoundOnNormalizedFlock) {
  ScenarioConfig cfg;
  cfg.agents = 10;
  cfg.dim = 2;
  cfg.tau = 0.2;
  cfg.scheme = WeightScheme::normalized();
  cfg.influence = InfluenceSpec::inverse_power(0.5);
  cfg.initial = RandomHistory{1.0, 1.0, true, 0.3, 5.0};
  cfg.rng_seed = 17;
  cfg.horizon = 1.0;
  EXPECT_TRUE(monitor_startup_bound(integrate(cfg)).pass);
}

TEST(Monitors, StartupBoundOutOfScopeForStrongCoupling) {
  ScenarioConfig cfg;
  cfg.agents = 3;
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.initial = ConstantHistory{{0, 1, 2}, {1, 0, -1}};
  const auto traj = integrate(cfg);
  EXPECT_THROW(monitor_startup_bound(traj), ScopeError);
  EXPECT_THROW(monitor_dv_inequality(traj, 0.2, 0.5), ScopeError);
}

TEST(Monitors, InequalityOnTwoAgents) {
  auto cfg = two_agent_constant(0.1, {0.0, 0.5}, {0.2, -0.1}, InfluenceSpec::inverse_power(0.5));
  cfg.horizon = 6.0;
  const auto traj = integrate(cfg);
  const auto r = monitor_dv_inequality(traj, 0.15, 5.5);
  EXPECT_TRUE(r.pass) << r.worst_violation << " vs " << r.tolerance_used;
  EXPECT_LT(r.worst_violation, 0.0);
}

TEST(Monitors, InequalityOnRandomClassicalFlock) {
  ScenarioConfig cfg;
  cfg.agents = 5;
  cfg.dim = 2;
  cfg.tau = 0.1;
  cfg.influence = InfluenceSpec::inverse_power(0.5);
  cfg.initial = RandomHistory{1.0, 0.5};
  cfg.rng_seed = 8;
  cfg.horizon = 8.0;
  const auto traj = integrate(cfg);
  const auto r = monitor_dv_inequality(traj, 0.15, 7.5);
  EXPECT_TRUE(r.pass) << r.worst_violation << " vs " << r.tolerance_used;
}

TEST(Monitors, InequalityWindowMustBeCovered) {
  auto cfg = two_agent_constant(0.1, {0.0, 0.5}, {0.2, -0.1});
  cfg.horizon = 1.0;
  const auto traj = integrate(cfg);
  EXPECT_THROW(monitor_dv_inequality(traj, 0.05, 0.5), CoverageError);
  EXPECT_THROW(monitor_dv_inequality(traj, 0.2, 2.0), CoverageError);
}

// Classifiers -------------------------------------------------------------

TEST(Classify, DivergentPairIsDiverged) {
  auto cfg = two_agent_constant(1.0, {0.0, 0.0}, {1.0, 0.0});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.horizon = 400.0;
  cfg.divergence_guard = 1e6;
  const auto traj = integrate(cfg);
  EXPECT_EQ(classify_flocking(traj, flocking_thresholds(traj)), FlockingVerdict::Diverged);
}

TEST(Classify, UndecidedWhenStillSpread) {
  auto cfg = two_agent_constant(0.1, {0.0, 3.0}, {0.5, -0.5}, InfluenceSpec::inverse_power(1.0));
  cfg.horizon = 1.0;
  const auto traj = integrate(cfg);
  EXPECT_EQ(classify_flocking(traj, 100.0, 1e-6), FlockingVerdict::NotDecided);
}

namespace {

OscillationClass demo(double tau) {
  auto cfg = two_agent_constant(tau, {0.0, 0.0}, {1.0, 0.0});
  cfg.scheme = WeightScheme::constant_coupling(1.0);
  cfg.steps_per_delay = 64;
  cfg.horizon = 40.0 * tau;
  const auto traj = integrate(cfg);
  std::vector<double> t, w;
  for (const auto& f : traj.frames) {
    t.push_back(f.t);
    w.push_back(f.velocities[0] - f.velocities[1]);
  }
  return classify_oscillation(t, w, tau);
}

}  // namespace

TEST(Classify, OscillationThresholds) {
  EXPECT_EQ(demo(0.1), OscillationClass::MonotoneDecay);
  EXPECT_EQ(demo(0.15), OscillationClass::MonotoneDecay);   // 0.30 < 1/e
  EXPECT_EQ(demo(0.2), OscillationClass::OscillatoryDecay);  // 0.40 > 1/e
  EXPECT_EQ(demo(0.5), OscillationClass::OscillatoryDecay);
  EXPECT_EQ(demo(0.75), OscillationClass::OscillatoryDecay);  // 1.50 < pi/2
  EXPECT_EQ(demo(0.8), OscillationClass::OscillatoryGrowth);  // 1.60 > pi/2
  EXPECT_EQ(demo(1.0), OscillationClass::OscillatoryGrowth);
}

TEST(Classify, ShortSeriesRejected) {
  std::vector<double> t{0.0, 0.1, 0.2}, w{1.0, 0.5, 0.2};
  EXPECT_THROW(classify_oscillation(t, w, 0.1), ArgumentError);
}

TEST(Classify, SyntheticSeries) {
  std::vector<double> t, decay, grow, mono;
  for (int k = 0; k <= 2000; ++k) {
    const double s = 0.01 * k;
    t.push_back(s);
    decay.push_back(std::exp(-0.2 * s) * std::cos(2.0 * s));
    grow.push_back(std::exp(0.1 * s) * std::cos(2.0 * s));
    mono.push_back(std::exp(-0.5 * s));
  }
  EXPECT_EQ(classify_oscillation(t, decay, 1.0), OscillationClass::OscillatoryDecay);
  EXPECT_EQ(classify_oscillation(t, grow, 1.0), OscillationClass::OscillatoryGrowth);
  EXPECT_EQ(classify_oscillation(t, mono, 1.0), OscillationClass::MonotoneDecay);
}
