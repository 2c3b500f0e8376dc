#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/frame.hpp"

namespace csdelay {

/// Uniform-grid record of past frames with cubic-Hermite dense output.
///
/// Grid times are t_k = k * h for integer k, with h = tau / m, so the
/// initial interval [-tau, 0] is k = -m .. 0 and t - tau of any node is a
/// node. The initial segment may carry its own position derivatives (the
/// history need not satisfy dx/dt = v), and the velocity derivative at t = 0
/// is two-sided: frame(0).accelerations is the history's left derivative and
/// the seam acceleration is the right derivative from the dynamics.
class HistoryBuffer {
 public:
  HistoryBuffer(double tau, int steps_per_delay, std::size_t agents, std::size_t dim)
      : tau_(tau), m_(steps_per_delay), agents_(agents), dim_(dim) {
    if (!(tau > 0.0) || !std::isfinite(tau)) throw ArgumentError("delay tau must be positive");
    if (steps_per_delay < 1) throw ArgumentError("steps_per_delay must be at least 1");
    if (agents == 0 || dim == 0) throw ArgumentError("need at least one agent and dimension");
    h_ = tau / static_cast<double>(steps_per_delay);
  }

  double tau() const noexcept { return tau_; }
  double step() const noexcept { return h_; }
  int steps_per_delay() const noexcept { return m_; }
  std::size_t agents() const noexcept { return agents_; }
  std::size_t dim() const noexcept { return dim_; }

  double time_of(long k) const noexcept { return static_cast<double>(k) * h_; }

  bool empty() const noexcept { return frames_.empty(); }
  long first_index() const noexcept { return first_; }
  long last_index() const noexcept { return first_ + static_cast<long>(frames_.size()) - 1; }
  double start_time() const noexcept { return time_of(first_index()); }
  double end_time() const noexcept { return time_of(last_index()); }

  /// Install the initial segment k = -m .. 0. `position_rates` may be empty,
  /// meaning the history obeys dx/dt = v.
  void set_initial(std::vector<Frame> frames, std::vector<std::vector<double>> position_rates = {}) {
    if (frames.size() != static_cast<std::size_t>(m_) + 1)
      throw ArgumentError("initial history needs steps_per_delay + 1 frames");
    if (!position_rates.empty() && position_rates.size() != frames.size())
      throw ArgumentError("initial position rates must match the initial frames");
    frames_.clear();
    for (std::size_t j = 0; j < frames.size(); ++j) {
      check_shape(frames[j]);
      frames[j].t = time_of(static_cast<long>(j) - m_);
      if (!position_rates.empty() && position_rates[j].size() != agents_ * dim_)
        throw ArgumentError("initial position rate has the wrong size");
      frames_.push_back(std::move(frames[j]));
    }
    first_ = -m_;
    initial_rates_ = std::move(position_rates);
    seam_.clear();
  }

  /// Right derivative of the velocities at t = 0, i.e. the dynamics at t = 0.
  void set_seam_acceleration(std::vector<double> a) {
    if (a.size() != agents_ * dim_) throw ArgumentError("seam acceleration has the wrong size");
    seam_ = std::move(a);
  }
  bool has_seam() const noexcept { return !seam_.empty(); }

  /// Append the frame at the next grid index.
  void push(Frame f) {
    if (frames_.empty()) throw ArgumentError("install the initial segment before pushing");
    check_shape(f);
    f.t = time_of(last_index() + 1);
    frames_.push_back(std::move(f));
  }

  /// Drop frames with index < k (never the latest one).
  void discard_before(long k) {
    while (!frames_.empty() && first_ < k && frames_.size() > 1) {
      frames_.pop_front();
      ++first_;
    }
  }

  const Frame& frame(long k) const {
    if (frames_.empty() || k < first_ || k > last_index())
      throw CoverageError("grid index " + std::to_string(k) + " is outside the history");
    return frames_[static_cast<std::size_t>(k - first_)];
  }
  const Frame& back() const { return frames_.back(); }

  /// Velocity derivative used on the interval to the right of node k.
  const std::vector<double>& acceleration_right(long k) const {
    if (k == 0 && !seam_.empty()) return seam_;
    return frame(k).accelerations;
  }
  const std::vector<double>& acceleration_left(long k) const { return frame(k).accelerations; }

  const std::vector<double>& position_rate_right(long k) const {
    if (k < 0 && !initial_rates_.empty()) return initial_rates_[static_cast<std::size_t>(k + m_)];
    return frame(k).velocities;
  }
  const std::vector<double>& position_rate_left(long k) const {
    if (k <= 0 && !initial_rates_.empty() && k >= -m_)
      return initial_rates_[static_cast<std::size_t>(k + m_)];
    return frame(k).velocities;
  }

  bool covers(double t) const {
    if (frames_.empty()) return false;
    const double u = t / h_;
    const double slack = 1e-9;
    return u >= static_cast<double>(first_) - slack && u <= static_cast<double>(last_index()) + slack;
  }

  /// Dense output at time t. Nodes are returned bit-exactly.
  AgentState dense_eval(double t) const {
    if (!covers(t))
      throw CoverageError("time " + std::to_string(t) + " is outside the history [" +
                          std::to_string(start_time()) + ", " + std::to_string(end_time()) + "]");
    const double u = t / h_;
    const double nearest = std::round(u);
    if (std::abs(u - nearest) <= 1e-9) {
      const Frame& f = frame(static_cast<long>(nearest));
      return {f.positions, f.velocities};
    }
    const long k = static_cast<long>(std::floor(u));
    return dense_eval_at(k, u - static_cast<double>(k));
  }

  /// Hermite interpolant on [t_k, t_{k+1}] at fraction theta in [0, 1].
  AgentState dense_eval_at(long k, double theta) const {
    if (theta == 0.0) {
      const Frame& f = frame(k);
      return {f.positions, f.velocities};
    }
    const Frame& a = frame(k);
    const Frame& b = frame(k + 1);
    const double s = theta;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s) * h_;
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0) * h_;
    AgentState out;
    out.positions = hermite(a.positions, position_rate_right(k), b.positions,
                            position_rate_left(k + 1), h00, h10, h01, h11);
    out.velocities = hermite(a.velocities, acceleration_right(k), b.velocities,
                             acceleration_left(k + 1), h00, h10, h01, h11);
    return out;
  }

 private:
  static std::vector<double> hermite(const std::vector<double>& y0, const std::vector<double>& d0,
                                     const std::vector<double>& y1, const std::vector<double>& d1,
                                     double h00, double h10, double h01, double h11) {
    std::vector<double> out(y0.size());
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = h00 * y0[j] + h10 * d0[j] + h01 * y1[j] + h11 * d1[j];
    return out;
  }

  void check_shape(const Frame& f) const {
    if (f.agents != agents_ || f.dim != dim_ || f.positions.size() != agents_ * dim_ ||
        f.velocities.size() != agents_ * dim_ || f.accelerations.size() != agents_ * dim_)
      throw ArgumentError("frame shape does not match the history");
  }

  double tau_;
  double h_ = 0.0;
  int m_;
  std::size_t agents_;
  std::size_t dim_;
  long first_ = 0;
  std::deque<Frame> frames_;
  std::vector<std::vector<double>> initial_rates_;
  std::vector<double> seam_;
};

}  // namespace csdelay
