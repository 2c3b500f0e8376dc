#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "csdelay/core/format.hpp"
#include "csdelay/dynamics/trajectory.hpp"

namespace csdelay {

/// Column names of the trajectory CSV:
///   t, x<i>_<c> (all agents, all components), v<i>_<c>, d_x, d_v, p_<c>
/// with agent index i and component c both starting at 0.
inline std::vector<std::string> trajectory_columns(std::size_t agents, std::size_t dim) {
  std::vector<std::string> cols{"t"};
  for (const char* prefix : {"x", "v"})
    for (std::size_t i = 0; i < agents; ++i)
      for (std::size_t c = 0; c < dim; ++c)
        cols.push_back(prefix + std::to_string(i) + "_" + std::to_string(c));
  cols.emplace_back("d_x");
  cols.emplace_back("d_v");
  for (std::size_t c = 0; c < dim; ++c) cols.push_back("p_" + std::to_string(c));
  return cols;
}

inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto cols = trajectory_columns(traj.agents, traj.dim);
  for (std::size_t j = 0; j < cols.size(); ++j) out << (j ? "," : "") << cols[j];
  out << '\n';
  for (std::size_t r = 0; r < traj.frames.size(); ++r) {
    const Frame& f = traj.frames[r];
    const FrameDiagnostics& g = traj.diagnostics[r];
    out << format_double(f.t);
    for (double x : f.positions) out << ',' << format_double(x);
    for (double v : f.velocities) out << ',' << format_double(v);
    out << ',' << format_double(g.d_x) << ',' << format_double(g.d_v);
    for (double p : g.momentum) out << ',' << format_double(p);
    out << '\n';
  }
}

}  // namespace csdelay
