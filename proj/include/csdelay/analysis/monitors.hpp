#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "csdelay/analysis/certificate.hpp"
#include "csdelay/analysis/diameters.hpp"
#include "csdelay/core/errors.hpp"
#include "csdelay/core/format.hpp"
#include "csdelay/core/history.hpp"
#include "csdelay/dynamics/trajectory.hpp"

namespace csdelay {

/// Outcome of checking one inequality along a trajectory.
struct MonitorReport {
  std::string kind;
  /// max over checked times of (quantity - bound); -inf when nothing was checked.
  double worst_violation = -std::numeric_limits<double>::infinity();
  double time_of_worst = 0.0;
  double tolerance_used = 0.0;
  bool pass = true;
  std::size_t checked = 0;
  /// Points skipped because the maximizing pair of d_v switched there.
  std::size_t excused = 0;
  double worst_excused = -std::numeric_limits<double>::infinity();
  std::string note;

  void observe(double violation, double t) {
    ++checked;
    if (violation > worst_violation) {
      worst_violation = violation;
      time_of_worst = t;
    }
  }
  void finish() { pass = !(worst_violation > tolerance_used); }
};

inline Diameters initial_diameters(const HistoryBuffer& history) {
  const long m = history.steps_per_delay();
  if (history.empty() || history.first_index() > -m || history.last_index() < 0)
    throw CoverageError("history does not cover the initial interval [-tau, 0]");
  Diameters out;
  for (long k = -m; k <= 0; ++k) {
    const auto dd = diameters(history.frame(k));
    out.d_x = std::max(out.d_x, dd.d_x);
    out.d_v = std::max(out.d_v, dd.d_v);
  }
  return out;
}

inline Diameters initial_diameters(const Trajectory& traj) {
  const long m = traj.steps_per_delay;
  if (traj.first_node > -m || traj.last_node() < 0)
    throw CoverageError("trajectory does not cover the initial interval [-tau, 0]");
  Diameters out;
  for (long k = -m; k <= 0; ++k) {
    out.d_x = std::max(out.d_x, traj.node(k).d_x);
    out.d_v = std::max(out.d_v, traj.node(k).d_v);
  }
  return out;
}

namespace detail {

inline void require_matching(const Trajectory& traj, const Certificate& cert) {
  const auto d0 = initial_diameters(traj);
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)); };
  if (cert.inputs.tau != traj.tau || !close(cert.inputs.d_x0, d0.d_x) ||
      !close(cert.inputs.d_v0, d0.d_v))
    throw ArgumentError("certificate was not computed from this trajectory's initial data");
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace detail

/// Exponential envelope on d_v implied by a certificate, checked at every grid node.
///   general:           d_v(t) <= (1 + 2 tau) d_v0 e^{-C (t - tau)} for t >= tau
///   constant velocity: d_v(t) <= d_v0 e^{-C t} for t >= 0; the note also records whether the
///                      time-independent bound d_v0 e^{-C tau} held.
/// `rate_multiplier` steepens the envelope for non-vacuity checks.
inline MonitorReport monitor_envelope(const Trajectory& traj, const Certificate& cert,
                                      double rate_multiplier = 1.0) {
  detail::require_matching(traj, cert);
  if (!(rate_multiplier > 0.0)) throw ArgumentError("rate multiplier must be positive");
  const double tau = traj.tau;
  const double dv0 = cert.inputs.d_v0;
  const double rate = cert.rate * rate_multiplier;
  const double h = traj.step;

  MonitorReport r;
  r.kind = "envelope";
  r.tolerance_used = (1e-8 + 100.0 * std::pow(h, 4)) * dv0;
  const bool general = cert.variant == CertificateVariant::General;
  const long start = general ? traj.steps_per_delay : 0;
  bool literal = true;
  for (long k = std::max(start, traj.first_node); k <= traj.last_node(); ++k) {
    const auto& nd = traj.node(k);
    const double bound = general ? (1.0 + 2.0 * tau) * dv0 * std::exp(-rate * (nd.t - tau))
                                 : dv0 * std::exp(-rate * nd.t);
    r.observe(nd.d_v - bound, nd.t);
    if (!general && nd.d_v > dv0 * std::exp(-rate * tau) + r.tolerance_used) literal = false;
  }
  if (!general)
    r.note = literal ? "constant bound d_v0*exp(-C*tau) also held"
                     : "constant bound d_v0*exp(-C*tau) did not hold";
  r.finish();
  return r;
}

/// max_{[-tau, tau]} d_v <= (1 + 2 tau) d_v0. Requires row sums of the weights at most one.
inline MonitorReport monitor_startup_bound(const Trajectory& traj) {
  if (!traj.config.scheme.row_sums_bounded(traj.agents))
    throw ScopeError("startup bound needs weight row sums <= 1; constant coupling kappa*(N-1) > 1");
  const long m = traj.steps_per_delay;
  if (traj.last_node() < m) throw CoverageError("trajectory does not reach t = tau");
  const double tau = traj.tau;
  const double dv0 = initial_diameters(traj).d_v;
  const double bound = (1.0 + 2.0 * tau) * dv0;

  MonitorReport r;
  r.kind = "startup_bound";
  double speed = 0.0;
  for (long k = -m; k <= m; ++k) {
    const auto& nd = traj.node(k);
    r.observe(nd.d_v - bound, nd.t);
    speed = std::max(speed, nd.speed);
  }
  r.tolerance_used =
      1e-8 * bound + 100.0 * std::pow(traj.step, 4) * dv0 + 16.0 * detail::kEps * speed;
  r.finish();
  return r;
}

/// Differential inequality for the velocity diameter on [t_lo, t_hi]:
///   d/dt d_v(t) <= 4 int_{t-tau}^t d_v(s - tau) ds - psi_bar d_v(t),
///   psi_bar = N min_{s in [t_lo - tau, t_hi - tau]} min_{i != j} psi_ij(s).
/// The derivative is a centered difference and the integral the trapezoid rule on
/// the grid. Tolerance is ten times the h^2 truncation bound, with derivative sizes
/// estimated from finite differences of d_v over the window, plus round-off.
/// d_v is only piecewise smooth: points adjacent to a switch of the maximizing
/// pair are counted in `excused` and do not fail the check.
inline MonitorReport monitor_dv_inequality(const Trajectory& traj, double t_lo, double t_hi) {
  if (!traj.config.scheme.row_sums_bounded(traj.agents))
    throw ScopeError("d_v inequality needs weight row sums <= 1");
  const double tau = traj.tau;
  const double h = traj.step;
  const long m = traj.steps_per_delay;
  if (!(t_lo > tau) || !(t_hi > t_lo))
    throw CoverageError("window must satisfy tau < t_lo < t_hi");
  const long k_lo = static_cast<long>(std::ceil(t_lo / h - 1e-9));
  const long k_hi = static_cast<long>(std::floor(t_hi / h + 1e-9));
  if (k_lo - 2 * m - 1 < traj.first_node || k_hi + 2 > traj.last_node())
    throw CoverageError("window is not covered by the trajectory");

  auto dv = [&](long k) { return traj.node(k).d_v; };
  auto kink = [&](long k) { return traj.node(k).argmax_switch; };

  MonitorReport r;
  r.kind = "dv_inequality";

  double min_w = std::numeric_limits<double>::infinity();
  for (long k = k_lo - m; k <= k_hi - m; ++k) min_w = std::min(min_w, traj.node(k).min_weight);
  const double psi_bar = traj.agents > 1 ? static_cast<double>(traj.agents) * min_w : 0.0;

  // Derivative sizes from smooth stencils only: no pair switch, and no breaking
  // point t = 0, tau, 2 tau (where derivatives of the solution jump) strictly inside.
  auto breaking = [&](long j) { return j >= 0 && j <= 2 * m && j % m == 0; };
  double d2 = 0.0, d3 = 0.0, speed = 0.0;
  for (long k = k_lo - 2 * m; k <= k_hi; ++k) {
    speed = std::max(speed, traj.node(k).speed);
    bool smooth = !breaking(k) && !breaking(k + 1);
    for (long j = k - 1; j <= k + 2 && smooth; ++j) smooth = !kink(j);
    if (!smooth) continue;
    d2 = std::max(d2, std::abs(dv(k + 1) - 2.0 * dv(k) + dv(k - 1)) / (h * h));
    d3 = std::max(d3, std::abs(dv(k + 2) - 3.0 * dv(k + 1) + 3.0 * dv(k) - dv(k - 1)) / (h * h * h));
  }
  const double truncation = h * h * (d3 / 6.0 + tau * d2 / 3.0);
  const double roundoff = 8.0 * detail::kEps * speed / h;
  r.tolerance_used = 10.0 * (truncation + roundoff);

  for (long k = k_lo; k <= k_hi; ++k) {
    const double deriv = (dv(k + 1) - dv(k - 1)) / (2.0 * h);
    double integral = 0.5 * (dv(k - 2 * m) + dv(k - m));
    for (long j = k - 2 * m + 1; j < k - m; ++j) integral += dv(j);
    integral *= h;
    const double violation = deriv - (4.0 * integral - psi_bar * dv(k));
    const double t = traj.node(k).t;
    if (kink(k) || kink(k + 1)) {
      ++r.excused;
      r.worst_excused = std::max(r.worst_excused, violation);
      continue;
    }
    r.observe(violation, t);
  }
  r.note = "psi_bar=" + format_double(psi_bar);
  r.finish();
  return r;
}

/// Largest deviation of total momentum from its value at t = 0, over recorded frames.
struct MomentumDrift {
  double max_deviation = 0.0;
  double per_unit_time = 0.0;
};

inline MomentumDrift momentum_drift(const Trajectory& traj) {
  MomentumDrift out;
  const std::vector<double>* p0 = nullptr;
  for (std::size_t r = 0; r < traj.frames.size(); ++r)
    if (traj.frames[r].t >= 0.0) {
      p0 = &traj.diagnostics[r].momentum;
      break;
    }
  if (p0 == nullptr) return out;
  for (std::size_t r = 0; r < traj.frames.size(); ++r) {
    if (traj.frames[r].t < 0.0) continue;
    const auto& p = traj.diagnostics[r].momentum;
    for (std::size_t c = 0; c < p.size(); ++c)
      out.max_deviation = std::max(out.max_deviation, std::abs(p[c] - (*p0)[c]));
  }
  const double span = traj.end_time();
  out.per_unit_time = span > 0.0 ? out.max_deviation / span : 0.0;
  return out;
}

}  // namespace csdelay
