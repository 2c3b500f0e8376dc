#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <type_traits>
#include <variant>
#include <vector>

#include "csdelay/core/frame.hpp"
#include "csdelay/core/history.hpp"
#include "csdelay/core/random.hpp"
#include "csdelay/core/scenario.hpp"

namespace csdelay {

namespace detail {

inline std::vector<std::vector<double>> finite_difference(const std::vector<std::vector<double>>& y,
                                                          double h) {
  const std::size_t rows = y.size();
  std::vector<std::vector<double>> d(rows, std::vector<double>(y.front().size(), 0.0));
  if (rows < 2) return d;
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t j = 0; j < y[k].size(); ++j) {
      if (rows == 2) {
        d[k][j] = (y[1][j] - y[0][j]) / h;
      } else if (k == 0) {
        d[k][j] = (-3.0 * y[0][j] + 4.0 * y[1][j] - y[2][j]) / (2.0 * h);
      } else if (k == rows - 1) {
        d[k][j] = (3.0 * y[k][j] - 4.0 * y[k - 1][j] + y[k - 2][j]) / (2.0 * h);
      } else {
        d[k][j] = (y[k + 1][j] - y[k - 1][j]) / (2.0 * h);
      }
    }
  }
  return d;
}

}  // namespace detail

/// Draw the randomized initial data of a scenario. Reproducible from the seed.
inline InitialHistorySpec realize_random(const RandomHistory& spec, std::size_t agents,
                                         std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(agents * dim);
  std::vector<double> v(agents * dim);
  for (auto& xi : x) xi = rng.uniform(-spec.position_box, spec.position_box);
  for (std::size_t i = 0; i < agents; ++i) {
    const auto p = rng.in_ball(dim, spec.velocity_radius);
    std::copy(p.begin(), p.end(), v.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  if (!spec.perturbation) return ConstantHistory{std::move(x), std::move(v)};
  std::vector<double> r(agents * dim);
  for (std::size_t i = 0; i < agents; ++i) {
    const auto p = rng.in_ball(dim, spec.perturbation_amplitude);
    std::copy(p.begin(), p.end(), r.begin() + static_cast<std::ptrdiff_t>(i * dim));
  }
  return AnalyticHistory{AnalyticHistory::Family::Sinusoidal, std::move(x), std::move(v),
                         std::move(r), spec.perturbation_frequency};
}

/// Sample the configured initial datum on the grid k = -m .. 0.
///
/// Frame accelerations hold the derivative of the supplied velocity history
/// (exact for closed forms, finite differences for raw samples); the
/// dynamics are not imposed on [-tau, 0].
inline HistoryBuffer build_initial_history(const ScenarioConfig& cfg) {
  cfg.validate();
  HistoryBuffer hist(cfg.tau, cfg.steps_per_delay, cfg.agents, cfg.dim);
  const std::size_t n = cfg.agents;
  const std::size_t d = cfg.dim;
  const int m = cfg.steps_per_delay;
  const std::size_t nd = n * d;

  InitialHistorySpec spec = cfg.initial;
  if (const auto* r = std::get_if<RandomHistory>(&spec)) spec = realize_random(*r, n, d, *cfg.rng_seed);

  std::vector<Frame> frames;
  std::vector<std::vector<double>> rates;
  frames.reserve(static_cast<std::size_t>(m) + 1);
  rates.reserve(static_cast<std::size_t>(m) + 1);

  std::visit(
      [&](const auto& init) {
        using T = std::decay_t<decltype(init)>;
        if constexpr (std::is_same_v<T, ConstantHistory>) {
          for (int k = -m; k <= 0; ++k) {
            frames.emplace_back(hist.time_of(k), n, d, init.positions, init.velocities,
                                std::vector<double>(nd, 0.0));
            rates.emplace_back(nd, 0.0);
          }
        } else if constexpr (std::is_same_v<T, AnalyticHistory>) {
          const bool lin = init.family == AnalyticHistory::Family::Linear;
          const double w = init.frequency;
          for (int k = -m; k <= 0; ++k) {
            const double t = hist.time_of(k);
            std::vector<double> x(nd), v(nd), a(nd);
            for (std::size_t j = 0; j < nd; ++j) {
              const double x0 = init.positions[j];
              const double v0 = init.velocities[j];
              const double r = init.rates[j];
              if (lin) {
                x[j] = x0 + v0 * t + 0.5 * r * t * t;
                v[j] = v0 + r * t;
                a[j] = r;
              } else {
                x[j] = x0 + v0 * t + r * (1.0 - std::cos(w * t)) / w;
                v[j] = v0 + r * std::sin(w * t);
                a[j] = r * w * std::cos(w * t);
              }
            }
            rates.push_back(v);
            frames.emplace_back(t, n, d, std::move(x), std::move(v), std::move(a));
          }
        } else if constexpr (std::is_same_v<T, SampledHistory>) {
          const double h = hist.step();
          const auto dx = detail::finite_difference(init.positions, h);
          const auto dv = detail::finite_difference(init.velocities, h);
          for (int k = -m; k <= 0; ++k) {
            const auto j = static_cast<std::size_t>(k + m);
            frames.emplace_back(hist.time_of(k), n, d, init.positions[j], init.velocities[j], dv[j]);
            rates.push_back(dx[j]);
          }
        }
      },
      spec);

  hist.set_initial(std::move(frames), std::move(rates));
  return hist;
}

}  // namespace csdelay
