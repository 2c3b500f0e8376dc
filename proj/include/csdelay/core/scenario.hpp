#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/influence.hpp"
#include "csdelay/dynamics/weight_scheme.hpp"

namespace csdelay {

// Initial history on [-tau, 0]. Agent arrays are agent-major (N * d entries).

/// Positions and velocities held fixed over the whole initial interval.
struct ConstantHistory {
  std::vector<double> positions;
  std::vector<double> velocities;
  bool operator==(const ConstantHistory&) const = default;
};

/// Closed-form velocity families; positions are the exact time integral of the velocities.
///   linear:     v(t) = v0 + r t,          x(t) = x0 + v0 t + r t^2 / 2
///   sinusoidal: v(t) = v0 + r sin(w t),   x(t) = x0 + v0 t + r (1 - cos(w t)) / w
struct AnalyticHistory {
  enum class Family { Linear, Sinusoidal };
  Family family = Family::Linear;
  std::vector<double> positions;   ///< x0, values at t = 0
  std::vector<double> velocities;  ///< v0, values at t = 0
  std::vector<double> rates;       ///< slope (linear) or amplitude (sinusoidal)
  double frequency = 1.0;
  bool operator==(const AnalyticHistory&) const = default;
};

/// Raw grid samples at t_k = -tau + k h, k = 0..m. Derivatives come from finite differences.
struct SampledHistory {
  std::string source;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  bool operator==(const SampledHistory&) const = default;
};

/// Positions uniform in [-box, box]^d, velocities uniform in the ball of radius `velocity_radius`,
/// constant over the initial interval unless a sinusoidal perturbation is requested.
struct RandomHistory {
  double position_box = 1.0;
  double velocity_radius = 1.0;
  bool perturbation = false;
  double perturbation_amplitude = 0.0;
  double perturbation_frequency = 1.0;
  bool operator==(const RandomHistory&) const = default;
};

using InitialHistorySpec = std::variant<ConstantHistory, AnalyticHistory, SampledHistory, RandomHistory>;

struct ScenarioConfig {
  std::size_t agents = 2;
  std::size_t dim = 1;
  double tau = 0.1;
  InfluenceSpec influence = InfluenceSpec::constant(1.0);
  WeightScheme scheme = WeightScheme::classical();
  InitialHistorySpec initial = ConstantHistory{};
  int steps_per_delay = 32;
  double horizon = 1.0;
  int record_stride = 1;
  std::optional<std::uint64_t> rng_seed;
  double divergence_guard = 1e12;

  double step() const { return tau / static_cast<double>(steps_per_delay); }

  bool operator==(const ScenarioConfig&) const = default;

  void validate() const {
    if (agents < 1) throw ConfigError("agents.count", "need at least one agent");
    if (dim < 1) throw ConfigError("agents.dimension", "need at least one dimension");
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("integrator.tau", "must be positive");
    if (steps_per_delay < 1)
      throw ConfigError("integrator.steps_per_delay", "must be at least 1");
    if (!(horizon > tau) || !std::isfinite(horizon))
      throw ConfigError("integrator.horizon", "must exceed tau");
    if (record_stride < 1) throw ConfigError("output.record_stride", "must be at least 1");
    if (!(divergence_guard > 0.0))
      throw ConfigError("integrator.divergence_guard", "must be positive");
    const std::size_t nd = agents * dim;
    std::visit(
        [&](const auto& init) {
          using T = std::decay_t<decltype(init)>;
          if constexpr (std::is_same_v<T, ConstantHistory>) {
            require_size(init.positions, nd, "initial.positions");
            require_size(init.velocities, nd, "initial.velocities");
          } else if constexpr (std::is_same_v<T, AnalyticHistory>) {
            require_size(init.positions, nd, "initial.positions");
            require_size(init.velocities, nd, "initial.velocities");
            require_size(init.rates, nd, "initial.rates");
            if (!(init.frequency > 0.0))
              throw ConfigError("initial.frequency", "must be positive");
          } else if constexpr (std::is_same_v<T, SampledHistory>) {
            const auto rows = static_cast<std::size_t>(steps_per_delay) + 1;
            if (init.positions.size() != rows || init.velocities.size() != rows)
              throw ConfigError("initial.samples_file",
                                "expected " + std::to_string(rows) + " grid rows on [-tau, 0]");
            for (std::size_t k = 0; k < rows; ++k) {
              require_size(init.positions[k], nd, "initial.samples_file");
              require_size(init.velocities[k], nd, "initial.samples_file");
            }
          } else {
            if (!rng_seed) throw ConfigError("initial.seed", "random initial data needs a seed");
            if (!(init.position_box >= 0.0))
              throw ConfigError("initial.position_box", "must be nonnegative");
            if (!(init.velocity_radius >= 0.0))
              throw ConfigError("initial.velocity_radius", "must be nonnegative");
            if (init.perturbation && !(init.perturbation_frequency > 0.0))
              throw ConfigError("initial.perturbation_frequency", "must be positive");
          }
        },
        initial);
  }

 private:
  static void require_size(const std::vector<double>& v, std::size_t n, const char* field) {
    if (v.size() != n)
      throw ConfigError(field, "expected " + std::to_string(n) + " values, got " +
                                   std::to_string(v.size()));
    for (double x : v)
      if (!std::isfinite(x)) throw ConfigError(field, "values must be finite");
  }
};

}  // namespace csdelay
