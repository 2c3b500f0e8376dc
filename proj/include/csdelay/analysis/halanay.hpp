#pragma once

#include <cmath>

#include "csdelay/analysis/bisect.hpp"
#include "csdelay/analysis/condition.hpp"
#include "csdelay/core/errors.hpp"

namespace csdelay {

/// g(gamma) = (beta - gamma) - alpha e^{gamma tau} (e^{gamma tau} - 1) / (gamma tau).
/// Strictly decreasing, g(0+) = beta - alpha.
inline double halanay_residual(double gamma, double alpha, double beta, double tau) {
  const double x = gamma * tau;
  return (beta - gamma) - alpha * std::exp(x) * expm1_ratio(x);
}

/// Decay rate of solutions of u' <= (alpha / tau) int_{t-tau}^t u(s - tau) ds - beta u:
/// the unique root of halanay_residual in (0, beta - alpha).
inline double halanay_gamma(double alpha, double beta, double tau) {
  if (!(alpha > 0.0) || !(alpha < beta) || !std::isfinite(beta))
    throw ArgumentError("halanay rate needs 0 < alpha < beta");
  if (!(tau > 0.0)) throw ArgumentError("halanay rate needs tau > 0");
  auto g = [&](double gamma) { return halanay_residual(gamma, alpha, beta, tau); };
  return bisect_root(g, 0.0, beta - alpha);
}

}  // namespace csdelay
