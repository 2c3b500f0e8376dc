#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "csdelay.hpp"

namespace csdelay::testkit {

inline ScenarioConfig two_agent_constant(double tau, std::vector<double> x, std::vector<double> v,
                                         InfluenceSpec psi = InfluenceSpec::constant(1.0)) {
  ScenarioConfig cfg;
  cfg.agents = 2;
  cfg.dim = 1;
  cfg.tau = tau;
  cfg.influence = std::move(psi);
  cfg.initial = ConstantHistory{std::move(x), std::move(v)};
  cfg.horizon = 10.0 * tau;
  return cfg;
}

/// Random flock drawn for the end-to-end checks. Cycles through agent counts,
/// dimensions, exponents and schemes so any 24 consecutive seeds cover every combination
/// of (N, d) and (beta, scheme).
struct FlockDraw {
  std::size_t agents;
  std::size_t dim;
  double beta;
  WeightScheme scheme;
};

inline FlockDraw flock_draw(std::size_t j) {
  static const std::size_t ns[] = {2, 5, 10, 20};
  static const std::size_t ds[] = {1, 2, 3};
  static const double betas[] = {0.25, 0.5, 1.0};
  return {ns[j % 4], ds[(j / 4) % 3], betas[j % 3],
          (j / 3) % 2 == 0 ? WeightScheme::classical() : WeightScheme::normalized()};
}

inline std::string flock_draw_text(std::size_t j) {
  const auto d = flock_draw(j);
  return "N=" + std::to_string(d.agents) + " d=" + std::to_string(d.dim) +
         " beta=" + format_double(d.beta) + " " + d.scheme.name();
}

inline ScenarioConfig random_flock(std::size_t j, double tau, double velocity_radius) {
  const auto d = flock_draw(j);
  ScenarioConfig cfg;
  cfg.agents = d.agents;
  cfg.dim = d.dim;
  cfg.tau = tau;
  cfg.influence = InfluenceSpec::inverse_power(d.beta);
  cfg.scheme = d.scheme;
  RandomHistory r;
  r.position_box = 0.25;
  r.velocity_radius = velocity_radius;
  cfg.initial = r;
  cfg.rng_seed = 1000 + j;
  cfg.steps_per_delay = 32;
  cfg.horizon = 1.0;
  return cfg;
}

/// Shrink tau, then the velocity spread, until a certificate exists.
inline ScenarioConfig certifiable_flock(std::size_t j) {
  double tau = 0.05, vr = 0.05;
  for (int attempt = 0; attempt < 40; ++attempt) {
    auto cfg = random_flock(j, tau, vr);
    const auto hist = build_initial_history(cfg);
    const auto d0 = initial_diameters(hist);
    const auto out = find_certificate({d0.d_x, d0.d_v, tau, cfg.influence},
                                      CertificateVariant::General);
    if (std::holds_alternative<Certificate>(out)) return cfg;
    if (attempt % 2 == 0)
      tau *= 0.7;
    else
      vr *= 0.7;
  }
  throw std::runtime_error("no certifiable draw for index " + std::to_string(j));
}

}  // namespace csdelay::testkit
