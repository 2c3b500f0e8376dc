#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "csdelay/analysis/diameters.hpp"
#include "csdelay/core/history.hpp"
#include "csdelay/core/initial_history.hpp"
#include "csdelay/core/scenario.hpp"
#include "csdelay/dynamics/trajectory.hpp"
#include "csdelay/dynamics/weights.hpp"

namespace csdelay {

namespace detail {

inline double max_speed(std::span<const double> v, std::size_t dim) {
  double best = 0.0;
  for (std::size_t i = 0; i * dim < v.size(); ++i) {
    double s2 = 0.0;
    for (std::size_t c = 0; c < dim; ++c) s2 += v[i * dim + c] * v[i * dim + c];
    best = std::max(best, std::sqrt(s2));
  }
  return best;
}

class TrajectoryRecorder {
 public:
  TrajectoryRecorder(Trajectory& traj, const ScenarioConfig& cfg) : traj_(traj), cfg_(cfg) {}

  void node(const Frame& f, long k, bool force_frame) {
    NodeRecord r;
    r.t = f.t;
    const auto px = max_pairwise_distance(f.positions, f.agents, f.dim);
    const auto pv = max_pairwise_distance(f.velocities, f.agents, f.dim);
    r.d_x = px.value;
    r.d_v = pv.value;
    r.speed = max_speed(f.velocities, f.dim);
    r.argmax_i = static_cast<std::uint32_t>(pv.i);
    r.argmax_k = static_cast<std::uint32_t>(pv.k);
    r.min_weight = weight_matrix(f.positions, f.agents, f.dim, cfg_.influence, cfg_.scheme)
                       .min_off_diagonal();
    if (have_prev_) {
      bool flipped = pv.i != prev_i_ || pv.k != prev_k_;
      if (!flipped) {
        double dot = 0.0;
        for (std::size_t c = 0; c < f.dim; ++c)
          dot += (f.velocities[pv.i * f.dim + c] - f.velocities[pv.k * f.dim + c]) * prev_diff_[c];
        flipped = dot < 0.0;
      }
      r.argmax_switch = flipped;
    }
    prev_i_ = pv.i;
    prev_k_ = pv.k;
    prev_diff_.assign(f.dim, 0.0);
    for (std::size_t c = 0; c < f.dim; ++c)
      prev_diff_[c] = f.velocities[pv.i * f.dim + c] - f.velocities[pv.k * f.dim + c];
    have_prev_ = true;
    traj_.nodes.push_back(r);

    const long m = cfg_.steps_per_delay;
    const bool strided = k == -m || k % cfg_.record_stride == 0;
    if (strided || force_frame) frame(f, r);
  }

  void frame(const Frame& f, const NodeRecord& r) {
    if (!traj_.frames.empty() && traj_.frames.back().t >= f.t) return;
    traj_.frames.push_back(f);
    traj_.diagnostics.push_back({r.d_x, r.d_v, total_momentum(f)});
  }

 private:
  Trajectory& traj_;
  const ScenarioConfig& cfg_;
  bool have_prev_ = false;
  std::size_t prev_i_ = 0;
  std::size_t prev_k_ = 0;
  std::vector<double> prev_diff_;
};

}  // namespace detail

/// Integrate the delayed dynamics from a prepared initial history.
///
/// Method of steps with classical RK4 on the grid h = tau / m. Velocity
/// stages need the delayed state at t - tau, t + h/2 - tau and t + h - tau;
/// the first and last are grid nodes at least tau - h behind the front, the
/// middle one comes from Hermite dense output of the completed past, so the
/// scheme stays explicit. Only the last 2m + 1 nodes are retained in the
/// history; frames are recorded every `record_stride` nodes.
inline Trajectory integrate(const ScenarioConfig& cfg, HistoryBuffer hist) {
  cfg.validate();
  const long m = cfg.steps_per_delay;
  const double h = hist.step();
  const std::size_t n = cfg.agents;
  const std::size_t d = cfg.dim;
  const std::size_t nd = n * d;
  if (hist.agents() != n || hist.dim() != d || hist.steps_per_delay() != m || hist.tau() != cfg.tau)
    throw ArgumentError("initial history does not match the scenario");
  if (hist.first_index() != -m || hist.last_index() != 0)
    throw CoverageError("initial history must cover exactly [-tau, 0]");

  Trajectory traj;
  traj.config = cfg;
  traj.tau = cfg.tau;
  traj.step = h;
  traj.steps_per_delay = cfg.steps_per_delay;
  traj.agents = n;
  traj.dim = d;
  traj.first_node = -m;

  const long last = static_cast<long>(std::ceil(cfg.horizon / h - 1e-9));
  traj.nodes.reserve(static_cast<std::size_t>(last + m + 1));

  detail::TrajectoryRecorder rec(traj, cfg);
  double vscale = 0.0;
  for (long k = -m; k <= 0; ++k) {
    rec.node(hist.frame(k), k, false);
    vscale = std::max(vscale, detail::max_speed(hist.frame(k).velocities, d));
  }
  if (vscale == 0.0) vscale = 1.0;
  const double speed_limit = cfg.divergence_guard * vscale;

  auto accel = [&](std::span<const double> x, std::span<const double> v) {
    return delayed_acceleration(x, v, n, d, cfg.influence, cfg.scheme);
  };

  {
    const Frame& lag = hist.frame(-m);
    hist.set_seam_acceleration(accel(lag.positions, lag.velocities));
  }

  std::vector<double> x_new(nd), v_new(nd);
  for (long k = 0; k < last; ++k) {
    const Frame& cur = hist.frame(k);
    const std::vector<double>& a1 = hist.acceleration_right(k);
    const AgentState mid = hist.dense_eval_at(k - m, 0.5);
    const std::vector<double> a2 = accel(mid.positions, mid.velocities);
    const Frame& lag = hist.frame(k + 1 - m);
    std::vector<double> a4 = accel(lag.positions, lag.velocities);

    bool finite = true;
    for (std::size_t j = 0; j < nd; ++j) {
      const double v = cur.velocities[j];
      const double k1x = v;
      const double k2x = v + 0.5 * h * a1[j];
      const double k3x = v + 0.5 * h * a2[j];
      const double k4x = v + h * a2[j];
      x_new[j] = cur.positions[j] + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
      v_new[j] = v + h / 6.0 * (a1[j] + 4.0 * a2[j] + a4[j]);
      finite = finite && std::isfinite(x_new[j]) && std::isfinite(v_new[j]);
    }

    const double t_new = hist.time_of(k + 1);
    if (!finite || detail::max_speed(v_new, d) > speed_limit) {
      traj.diverged = true;
      traj.blowup_time = t_new;
      traj.divergence_reason = finite ? "velocity exceeded the divergence guard"
                                      : "non-finite state";
      const long kb = hist.last_index();
      rec.frame(hist.back(), traj.node(kb));
      break;
    }

    hist.push(Frame(t_new, n, d, x_new, v_new, std::move(a4)));
    rec.node(hist.back(), k + 1, k + 1 == last);
    hist.discard_before(k + 1 - 2 * m);
  }
  return traj;
}

inline Trajectory integrate(const ScenarioConfig& cfg) {
  return integrate(cfg, build_initial_history(cfg));
}

}  // namespace csdelay
