#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/history.hpp"
#include "csdelay/core/influence.hpp"
#include "csdelay/dynamics/weight_scheme.hpp"

namespace csdelay {

/// Dense N x N matrix of communication weights, row i holding psi_i*.
struct WeightMatrix {
  std::size_t agents = 0;
  std::vector<double> entries;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * agents + j]; }

  std::span<const double> row(std::size_t i) const {
    return {entries.data() + i * agents, agents};
  }

  /// min over i != j; +inf for a single agent.
  double min_off_diagonal() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < agents; ++i)
      for (std::size_t j = 0; j < agents; ++j)
        if (i != j) m = std::min(m, entries[i * agents + j]);
    return m;
  }
};

namespace detail {

/// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      c += (sum - t) + x;
    else
      c += (x - t) + sum;
    sum = t;
  }
  return sum + c;
}

inline double squared_distance(std::span<const double> positions, std::size_t dim, std::size_t i,
                               std::size_t j) {
  double s2 = 0.0;
  for (std::size_t k = 0; k < dim; ++k) {
    const double dx = positions[j * dim + k] - positions[i * dim + k];
    s2 += dx * dx;
  }
  return s2;
}

}  // namespace detail

/// Communication weights for agent positions (agent-major, `agents * dim` entries).
///
/// Diagonal entries are filled in (the normalized denominator includes l = i)
/// even though they multiply v_i - v_i = 0 in the dynamics.
inline WeightMatrix weight_matrix(std::span<const double> positions, std::size_t agents,
                                  std::size_t dim, const InfluenceSpec& influence,
                                  const WeightScheme& scheme) {
  if (agents == 0 || dim == 0) throw ArgumentError("weight matrix needs agents and a dimension");
  if (positions.size() != agents * dim) throw ArgumentError("positions must hold agents * dim values");
  WeightMatrix w{agents, std::vector<double>(agents * agents)};

  if (scheme.kind == WeightScheme::Kind::ConstantCoupling) {
    for (std::size_t i = 0; i < agents; ++i)
      for (std::size_t j = 0; j < agents; ++j) w.entries[i * agents + j] = i == j ? 0.0 : scheme.kappa;
    return w;
  }

  // psi is symmetric in (i, j); evaluate each pair once.
  for (std::size_t i = 0; i < agents; ++i) {
    w.entries[i * agents + i] = influence.from_squared(0.0);
    for (std::size_t j = i + 1; j < agents; ++j) {
      const double psi = influence.from_squared(detail::squared_distance(positions, dim, i, j));
      w.entries[i * agents + j] = psi;
      w.entries[j * agents + i] = psi;
    }
  }

  if (scheme.kind == WeightScheme::Kind::Classical) {
    const double n = static_cast<double>(agents);
    for (auto& e : w.entries) e /= n;
    return w;
  }

  for (std::size_t i = 0; i < agents; ++i) {
    auto row = std::span<double>(w.entries.data() + i * agents, agents);
    const double total = detail::compensated_sum(row);
    if (!(total > 0.0))
      throw DegenerateWeightsError("normalized weights: agent " + std::to_string(i) +
                                   " receives zero total influence");
    for (auto& e : row) e /= total;
  }
  return w;
}

/// sum_j w_ij (v_j - v_i) for every agent.
inline std::vector<double> alignment_force(const WeightMatrix& w, std::span<const double> velocities,
                                           std::size_t dim) {
  const std::size_t n = w.agents;
  std::vector<double> a(n * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double wij = w.entries[i * n + j];
      for (std::size_t k = 0; k < dim; ++k)
        a[i * dim + k] += wij * (velocities[j * dim + k] - velocities[i * dim + k]);
    }
  }
  return a;
}

/// Accelerations driven by the state at the delayed time.
inline std::vector<double> delayed_acceleration(std::span<const double> delayed_positions,
                                                std::span<const double> delayed_velocities,
                                                std::size_t agents, std::size_t dim,
                                                const InfluenceSpec& influence,
                                                const WeightScheme& scheme) {
  const auto w = weight_matrix(delayed_positions, agents, dim, influence, scheme);
  return alignment_force(w, delayed_velocities, dim);
}

/// Right-hand side of the velocity equation at time t, read from the history at t - tau.
inline std::vector<double> rhs(const HistoryBuffer& history, double t, const InfluenceSpec& influence,
                               const WeightScheme& scheme) {
  const double delayed = t - history.tau();
  if (!history.covers(delayed))
    throw CoverageError("history does not cover the delayed time " + std::to_string(delayed));
  const auto s = history.dense_eval(delayed);
  return delayed_acceleration(s.positions, s.velocities, history.agents(), history.dim(), influence,
                              scheme);
}

}  // namespace csdelay
