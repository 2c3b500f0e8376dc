#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "csdelay/core/errors.hpp"

namespace csdelay {

/// Snapshot of all agents at one grid time. Arrays are agent-major: entry i*dim + k.
struct Frame {
  double t = 0.0;
  std::size_t agents = 0;
  std::size_t dim = 0;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> accelerations;

  Frame() = default;

  Frame(double time, std::size_t n, std::size_t d)
      : t(time), agents(n), dim(d), positions(n * d), velocities(n * d), accelerations(n * d) {
    if (n == 0 || d == 0) throw ArgumentError("a frame needs at least one agent and dimension");
  }

  Frame(double time, std::size_t n, std::size_t d, std::vector<double> x, std::vector<double> v,
        std::vector<double> a)
      : t(time),
        agents(n),
        dim(d),
        positions(std::move(x)),
        velocities(std::move(v)),
        accelerations(std::move(a)) {
    if (n == 0 || d == 0) throw ArgumentError("a frame needs at least one agent and dimension");
    if (positions.size() != n * d || velocities.size() != n * d || accelerations.size() != n * d)
      throw ArgumentError("frame arrays must all hold agents * dim entries");
  }

  std::span<const double> position(std::size_t i) const {
    return {positions.data() + i * dim, dim};
  }
  std::span<const double> velocity(std::size_t i) const {
    return {velocities.data() + i * dim, dim};
  }
  std::span<const double> acceleration(std::size_t i) const {
    return {accelerations.data() + i * dim, dim};
  }

  bool operator==(const Frame&) const = default;
};

/// Positions and velocities at an arbitrary time, produced by dense output.
struct AgentState {
  std::vector<double> positions;
  std::vector<double> velocities;
};

}  // namespace csdelay
