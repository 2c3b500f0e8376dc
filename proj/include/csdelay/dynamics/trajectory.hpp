#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/frame.hpp"
#include "csdelay/core/scenario.hpp"

namespace csdelay {

struct FrameDiagnostics {
  double d_x = 0.0;
  double d_v = 0.0;
  std::vector<double> momentum;
};

/// Per-node scalars kept at every grid time (not strided), used by the monitors.
struct NodeRecord {
  double t = 0.0;
  double d_x = 0.0;
  double d_v = 0.0;
  /// min_{i != j} psi_ij evaluated at this node's positions.
  double min_weight = 0.0;
  /// max_i |v_i|, the scale of round-off in velocity differences.
  double speed = 0.0;
  std::uint32_t argmax_i = 0;
  std::uint32_t argmax_k = 0;
  /// The d_v maximizing pair changed, or its difference vector reversed, since the previous node.
  bool argmax_switch = false;
};

struct Trajectory {
  ScenarioConfig config;
  double tau = 0.0;
  double step = 0.0;
  int steps_per_delay = 1;
  std::size_t agents = 0;
  std::size_t dim = 0;

  std::vector<Frame> frames;
  std::vector<FrameDiagnostics> diagnostics;

  /// Node records for grid indices first_node .. first_node + nodes.size() - 1.
  std::vector<NodeRecord> nodes;
  long first_node = 0;

  bool diverged = false;
  double blowup_time = 0.0;
  std::string divergence_reason;

  long last_node() const { return first_node + static_cast<long>(nodes.size()) - 1; }
  double end_time() const { return nodes.empty() ? 0.0 : nodes.back().t; }

  const NodeRecord& node(long k) const {
    if (k < first_node || k > last_node())
      throw CoverageError("grid index " + std::to_string(k) + " outside the trajectory");
    return nodes[static_cast<std::size_t>(k - first_node)];
  }

  /// Grid index of the node nearest to t.
  long index_of(double t) const { return static_cast<long>(std::llround(t / step)); }
};

}  // namespace csdelay
