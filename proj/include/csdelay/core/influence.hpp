#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/format.hpp"

namespace csdelay {

// Influence functions psi: [0, inf) -> [0, 1], continuous in the distance.

struct ConstantInfluence {
  double value = 1.0;
  bool operator==(const ConstantInfluence&) const = default;
};

/// psi(s) = (1 + s^2)^(-beta).
struct InversePowerInfluence {
  double beta = 1.0;
  bool operator==(const InversePowerInfluence&) const = default;
};

struct InfluenceSample {
  double s = 0.0;
  double psi = 0.0;
  bool operator==(const InfluenceSample&) const = default;
};

/// Piecewise-linear interpolant through samples; first sample at s = 0, constant past the last one.
struct TableInfluence {
  std::vector<InfluenceSample> samples;
  bool operator==(const TableInfluence&) const = default;
};

class InfluenceSpec {
 public:
  using Kind = std::variant<ConstantInfluence, InversePowerInfluence, TableInfluence>;

  InfluenceSpec() : InfluenceSpec(ConstantInfluence{1.0}) {}

  InfluenceSpec(ConstantInfluence c) : kind_(c) {
    if (!(c.value >= 0.0 && c.value <= 1.0))
      throw ArgumentError("constant influence must lie in [0, 1]");
  }

  InfluenceSpec(InversePowerInfluence p) : kind_(p) {
    if (!(p.beta > 0.0) || !std::isfinite(p.beta))
      throw ArgumentError("inverse-power exponent beta must be positive");
  }

  InfluenceSpec(TableInfluence t) : kind_(std::move(t)) { prepare_table(); }

  static InfluenceSpec constant(double value) { return InfluenceSpec(ConstantInfluence{value}); }
  static InfluenceSpec inverse_power(double beta) {
    return InfluenceSpec(InversePowerInfluence{beta});
  }
  static InfluenceSpec table(std::vector<InfluenceSample> samples) {
    return InfluenceSpec(TableInfluence{std::move(samples)});
  }

  const Kind& kind() const noexcept { return kind_; }

  bool is_constant() const noexcept { return std::holds_alternative<ConstantInfluence>(kind_); }
  bool is_inverse_power() const noexcept {
    return std::holds_alternative<InversePowerInfluence>(kind_);
  }
  bool is_table() const noexcept { return std::holds_alternative<TableInfluence>(kind_); }

  /// True when psi is nonincreasing, so the rearrangement coincides with psi.
  bool is_monotone() const noexcept { return !is_table() || table_monotone_; }

  double operator()(double s) const {
    if (!(s >= 0.0)) throw ArgumentError("influence evaluated at a negative distance");
    return eval_unchecked(s, s * s);
  }

  /// Evaluate from the squared distance; avoids a square root for the closed forms.
  double from_squared(double s2) const {
    if (!(s2 >= 0.0)) throw ArgumentError("influence evaluated at a negative distance");
    if (const auto* p = std::get_if<InversePowerInfluence>(&kind_))
      return std::pow(1.0 + s2, -p->beta);
    return eval_unchecked(std::sqrt(s2), s2);
  }

  /// Running minimum of psi over [0, u].
  double running_min(double u) const {
    if (!(u >= 0.0)) throw ArgumentError("rearrangement evaluated at a negative distance");
    const auto* t = std::get_if<TableInfluence>(&kind_);
    if (t == nullptr) return eval_unchecked(u, u * u);
    const auto& s = t->samples;
    // Index of the last sample with s_k <= u. Minima of a piecewise-linear
    // function over [0, u] sit at breakpoints or at u itself.
    auto it = std::upper_bound(s.begin(), s.end(), u,
                               [](double x, const InfluenceSample& p) { return x < p.s; });
    const auto k = static_cast<std::size_t>(std::distance(s.begin(), it)) - 1;
    return std::min(prefix_min_[k], eval_unchecked(u, u * u));
  }

  bool operator==(const InfluenceSpec& other) const { return kind_ == other.kind_; }

 private:
  double eval_unchecked(double s, double s2) const {
    return std::visit(
        [&](const auto& k) -> double {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, ConstantInfluence>) {
            return k.value;
          } else if constexpr (std::is_same_v<T, InversePowerInfluence>) {
            return std::pow(1.0 + s2, -k.beta);
          } else {
            return interpolate(k.samples, s);
          }
        },
        kind_);
  }

  static double interpolate(const std::vector<InfluenceSample>& samples, double s) {
    if (s >= samples.back().s) return samples.back().psi;
    auto it = std::upper_bound(samples.begin(), samples.end(), s,
                               [](double x, const InfluenceSample& p) { return x < p.s; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double w = (s - lo.s) / (hi.s - lo.s);
    return lo.psi + w * (hi.psi - lo.psi);
  }

  void prepare_table() {
    const auto& s = std::get<TableInfluence>(kind_).samples;
    if (s.empty()) throw ArgumentError("influence table needs at least one sample");
    if (s.front().s != 0.0) throw ArgumentError("influence table must start at s = 0");
    prefix_min_.clear();
    prefix_min_.reserve(s.size());
    table_monotone_ = true;
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (!(s[k].psi >= 0.0 && s[k].psi <= 1.0))
        throw ArgumentError("influence table values must lie in [0, 1]");
      if (k > 0 && !(s[k].s > s[k - 1].s))
        throw ArgumentError("influence table distances must be strictly increasing");
      if (k > 0 && s[k].psi > s[k - 1].psi) table_monotone_ = false;
      prefix_min_.push_back(k == 0 ? s[k].psi : std::min(prefix_min_.back(), s[k].psi));
    }
  }

  Kind kind_;
  std::vector<double> prefix_min_;
  bool table_monotone_ = true;
};

inline double evaluate_influence(const InfluenceSpec& spec, double s) { return spec(s); }

inline std::string describe(const InfluenceSpec& spec) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantInfluence>)
          return "constant(" + format_double(k.value) + ")";
        else if constexpr (std::is_same_v<T, InversePowerInfluence>)
          return "inverse_power(beta=" + format_double(k.beta) + ")";
        else
          return "table(" + std::to_string(k.samples.size()) + " samples)";
      },
      spec.kind());
}

}  // namespace csdelay
