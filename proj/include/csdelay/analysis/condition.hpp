#pragma once

#include <cmath>
#include <string>

#include "csdelay/core/errors.hpp"
#include "csdelay/core/influence.hpp"

namespace csdelay {

/// Nonincreasing rearrangement Psi(u) = min_{s in [0, u]} psi(s).
inline double rearrangement(const InfluenceSpec& influence, double u) {
  return influence.running_min(u);
}

/// (e^x - 1) / x, by series near zero where the quotient cancels.
inline double expm1_ratio(double x) {
  if (std::abs(x) < 1e-4) return 1.0 + x * (0.5 + x * (1.0 / 6.0 + x / 24.0));
  return std::expm1(x) / x;
}

/// Delay penalty 4 tau e^{C tau} (e^{C tau} - 1) / (C tau) on the right of the flocking condition.
inline double delay_penalty(double rate, double tau) {
  const double x = rate * tau;
  return 4.0 * tau * std::exp(x) * expm1_ratio(x);
}

enum class CertificateVariant {
  General,           ///< arbitrary continuous initial data
  ConstantVelocity,  ///< initial velocities constant on [-tau, 0]
};

inline const char* variant_name(CertificateVariant v) {
  return v == CertificateVariant::General ? "general" : "constant_velocity";
}

struct ConditionInputs {
  double d_x0 = 0.0;
  double d_v0 = 0.0;
  double tau = 0.0;
  InfluenceSpec influence;
};

struct ConditionSides {
  double lhs = 0.0;
  double rhs = 0.0;
  /// Psi evaluated at the position-diameter bound; lhs = psi_bound - C.
  double psi_bound = 0.0;
  double margin() const { return lhs - rhs; }
  bool holds() const { return lhs >= rhs; }
};

/// Bound on sup d_x implied by a decay rate C:
///   general:           d_x0 + (1 + 2 tau)(tau + 1/C) d_v0
///   constant velocity: d_x0 + d_v0 / C
inline double position_diameter_bound(double rate, const ConditionInputs& in,
                                      CertificateVariant variant) {
  if (in.d_v0 == 0.0) return in.d_x0;
  if (variant == CertificateVariant::General)
    return in.d_x0 + (1.0 + 2.0 * in.tau) * (in.tau + 1.0 / rate) * in.d_v0;
  return in.d_x0 + in.d_v0 / rate;
}

inline ConditionSides condition_lhs_rhs(double rate, const ConditionInputs& in,
                                        CertificateVariant variant) {
  if (!(rate > 0.0 && rate < 1.0)) throw ArgumentError("decay rate C must lie in (0, 1)");
  if (!(in.tau > 0.0)) throw ArgumentError("delay tau must be positive");
  if (!(in.d_x0 >= 0.0) || !(in.d_v0 >= 0.0))
    throw ArgumentError("initial diameters must be nonnegative");
  ConditionSides s;
  s.psi_bound = rearrangement(in.influence, position_diameter_bound(rate, in, variant));
  s.lhs = s.psi_bound - rate;
  s.rhs = delay_penalty(rate, in.tau);
  return s;
}

}  // namespace csdelay
