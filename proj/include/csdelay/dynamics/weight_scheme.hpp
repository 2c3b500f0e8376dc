#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "csdelay/core/errors.hpp"

namespace csdelay {

/// How influence values become communication weights psi_ij.
struct WeightScheme {
  enum class Kind {
    Classical,         ///< psi(|x_j - x_i|) / N
    Normalized,        ///< psi(|x_j - x_i|) / sum_l psi(|x_l - x_i|), row-stochastic
    ConstantCoupling,  ///< kappa for every off-diagonal pair
  };

  Kind kind = Kind::Classical;
  double kappa = 1.0;

  static WeightScheme classical() { return {Kind::Classical, 1.0}; }
  static WeightScheme normalized() { return {Kind::Normalized, 1.0}; }
  static WeightScheme constant_coupling(double kappa) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
      throw ArgumentError("coupling kappa must be positive");
    return {Kind::ConstantCoupling, kappa};
  }

  /// Classical and normalized weights satisfy the row-sum bound and the Psi(d_x)/N lower bound.
  bool influence_based() const noexcept { return kind != Kind::ConstantCoupling; }

  /// Every row sum of the weights is at most one for `agents` agents.
  bool row_sums_bounded(std::size_t agents) const noexcept {
    if (influence_based()) return true;
    return kappa * static_cast<double>(agents - 1) <= 1.0;
  }

  std::string name() const {
    switch (kind) {
      case Kind::Classical: return "classical";
      case Kind::Normalized: return "normalized";
      case Kind::ConstantCoupling: return "constant_coupling";
    }
    return "unknown";
  }

  bool operator==(const WeightScheme& o) const {
    return kind == o.kind && (kind != Kind::ConstantCoupling || kappa == o.kappa);
  }
};

}  // namespace csdelay
