#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "csdelay/analysis/certificate.hpp"
#include "csdelay/analysis/monitors.hpp"
#include "csdelay/core/errors.hpp"
#include "csdelay/dynamics/trajectory.hpp"

namespace csdelay {

enum class FlockingVerdict { Flocking, NotDecided, Diverged };

inline const char* verdict_name(FlockingVerdict v) {
  switch (v) {
    case FlockingVerdict::Flocking: return "flocking";
    case FlockingVerdict::NotDecided: return "not_decided";
    case FlockingVerdict::Diverged: return "diverged";
  }
  return "unknown";
}

struct FlockingThresholds {
  double dx_cap = 0.0;
  double dv_floor = 0.0;
};

/// Finite-time stand-ins for "sup d_x < inf, d_v -> 0": the position bound the
/// certificate implies (plus a 1e-8 relative integration/round-off allowance) and
/// a velocity floor of 1e-6 d_v0.
inline FlockingThresholds flocking_thresholds(const Certificate& cert) {
  const double cap = cert.position_bound();
  return {cap + 1e-8 * (1.0 + cap), 1e-6 * cert.inputs.d_v0};
}

/// Without a certificate: d_x0 + (1 + 2 tau) d_v0 * horizon, the drift allowed if d_v never
/// exceeded its startup bound.
inline FlockingThresholds flocking_thresholds(const Trajectory& traj) {
  const auto d0 = initial_diameters(traj);
  const double cap = d0.d_x + (1.0 + 2.0 * traj.tau) * d0.d_v * traj.end_time();
  return {cap + 1e-8 * (1.0 + cap), 1e-6 * d0.d_v};
}

/// Flocking when d_x stayed under the cap, the final d_v is under the floor and
/// d_v at the end is no larger than at half the horizon.
inline FlockingVerdict classify_flocking(const Trajectory& traj, double dx_cap, double dv_floor) {
  if (traj.diverged) return FlockingVerdict::Diverged;
  if (traj.nodes.empty()) return FlockingVerdict::NotDecided;
  double dx_max = 0.0;
  for (const auto& nd : traj.nodes) dx_max = std::max(dx_max, nd.d_x);
  const double dv_end = traj.nodes.back().d_v;
  const double dv_mid = traj.node(traj.index_of(0.5 * traj.end_time())).d_v;
  if (dx_max <= dx_cap && dv_end <= dv_floor && dv_end <= dv_mid) return FlockingVerdict::Flocking;
  return FlockingVerdict::NotDecided;
}

inline FlockingVerdict classify_flocking(const Trajectory& traj, const FlockingThresholds& th) {
  return classify_flocking(traj, th.dx_cap, th.dv_floor);
}

enum class OscillationClass { MonotoneDecay, OscillatoryDecay, OscillatoryGrowth };

inline const char* oscillation_name(OscillationClass c) {
  switch (c) {
    case OscillationClass::MonotoneDecay: return "monotone_decay";
    case OscillationClass::OscillatoryDecay: return "oscillatory_decay";
    case OscillationClass::OscillatoryGrowth: return "oscillatory_growth";
  }
  return "unknown";
}

/// Qualitative behaviour of a scalar series w(t_k) from the two-agent linear delay equation.
///
/// Samples earlier than t_0 + 2 tau are a transient and ignored. Without sign
/// changes the series must be decaying (MonotoneDecay); otherwise successive
/// local extrema of |w| decide: three or more consecutive growing extrema at
/// the end of the series mean OscillatoryGrowth, anything else OscillatoryDecay.
inline OscillationClass classify_oscillation(std::span<const double> t, std::span<const double> w,
                                             double tau) {
  if (t.size() != w.size()) throw ArgumentError("time and value series differ in length");
  if (!(tau > 0.0)) throw ArgumentError("tau must be positive");
  if (t.size() < 4 || t.back() - t.front() < 10.0 * tau)
    throw ArgumentError("oscillation classifier needs at least 10 delay intervals of data");

  std::size_t start = 0;
  while (start < t.size() && t[start] < t.front() + 2.0 * tau) ++start;
  const auto tail = w.subspan(start);
  if (tail.size() < 3) throw ArgumentError("series too short after the transient");

  std::size_t sign_changes = 0;
  for (std::size_t k = 1; k < tail.size(); ++k)
    if ((tail[k - 1] < 0.0 && tail[k] > 0.0) || (tail[k - 1] > 0.0 && tail[k] < 0.0)) ++sign_changes;

  if (sign_changes == 0) {
    if (std::abs(tail.back()) > std::abs(tail.front()))
      throw ArgumentError("non-oscillatory growth is outside the classifier's range");
    return OscillationClass::MonotoneDecay;
  }

  std::vector<double> extrema;
  for (std::size_t k = 1; k + 1 < tail.size(); ++k) {
    const double a = tail[k] - tail[k - 1];
    const double b = tail[k + 1] - tail[k];
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) extrema.push_back(std::abs(tail[k]));
  }
  std::size_t growing_run = 0;
  for (std::size_t j = extrema.size(); j-- > 1;) {
    if (extrema[j] > extrema[j - 1])
      ++growing_run;
    else
      break;
  }
  // growing_run ratios > 1 cover growing_run + 1 extrema.
  if (growing_run >= 2) return OscillationClass::OscillatoryGrowth;
  return OscillationClass::OscillatoryDecay;
}

}  // namespace csdelay
