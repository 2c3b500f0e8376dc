#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <variant>
#include <vector>

#include "csdelay/analysis/bisect.hpp"
#include "csdelay/analysis/condition.hpp"
#include "csdelay/core/errors.hpp"

namespace csdelay {

/// A decay rate C in (0, 1) for which the flocking condition holds.
struct Certificate {
  double rate = 0.0;
  double margin = 0.0;
  CertificateVariant variant = CertificateVariant::General;
  ConditionInputs inputs;
  /// Psi at the position-diameter bound for `rate`.
  double psi_bound = 0.0;
  /// Ends of the feasible component that contains `rate`. `lower_is_grid_floor`
  /// means the component reaches the smallest scanned rate.
  double feasible_lo = 0.0;
  double feasible_hi = 0.0;
  bool lower_is_grid_floor = false;

  /// Bound on sup_t d_x(t) that the certificate implies.
  double position_bound() const { return position_diameter_bound(rate, inputs, variant); }
};

struct Infeasible {
  double best_rate = 0.0;
  double best_margin = -std::numeric_limits<double>::infinity();
  CertificateVariant variant = CertificateVariant::General;
  ConditionInputs inputs;
};

using CertificateOutcome = std::variant<Certificate, Infeasible>;

struct CertificateSearchOptions {
  std::size_t grid_points = 10000;
  double relative_width = 1e-10;
  /// Smallest rate in the logarithmic part of the scan.
  double log_floor = 1e-8;
  /// Switch from logarithmic to linear spacing.
  double log_ceiling = 1e-2;
};

/// Scan grid over (0, 1): half log-spaced on [floor, ceiling), half linear on [ceiling, 1).
inline std::vector<double> certificate_grid(const CertificateSearchOptions& opt = {}) {
  const std::size_t half = opt.grid_points / 2;
  const std::size_t rest = opt.grid_points - half;
  std::vector<double> grid;
  grid.reserve(opt.grid_points);
  const double l0 = std::log10(opt.log_floor);
  const double l1 = std::log10(opt.log_ceiling);
  for (std::size_t k = 0; k < half; ++k)
    grid.push_back(std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(k) / static_cast<double>(half)));
  for (std::size_t k = 0; k < rest; ++k)
    grid.push_back(opt.log_ceiling +
                   (1.0 - opt.log_ceiling) * static_cast<double>(k) / static_cast<double>(rest));
  return grid;
}

/// Largest feasible decay rate, or the least-violating grid rate if none is feasible.
inline CertificateOutcome find_certificate(const ConditionInputs& in, CertificateVariant variant,
                                           const CertificateSearchOptions& opt = {}) {
  if (!(in.tau > 0.0)) throw ArgumentError("delay tau must be positive");
  if (!(in.d_x0 >= 0.0) || !(in.d_v0 >= 0.0))
    throw ArgumentError("initial diameters must be nonnegative");
  if (opt.grid_points < 2) throw ArgumentError("certificate grid needs at least two points");

  const auto grid = certificate_grid(opt);
  auto feasible = [&](double c) { return condition_lhs_rhs(c, in, variant).holds(); };

  std::vector<char> ok(grid.size());
  long best = -1;
  Infeasible none{0.0, -std::numeric_limits<double>::infinity(), variant, in};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto s = condition_lhs_rhs(grid[j], in, variant);
    ok[j] = s.holds();
    if (ok[j]) best = static_cast<long>(j);
    if (s.margin() > none.best_margin) {
      none.best_margin = s.margin();
      none.best_rate = grid[j];
    }
  }
  if (best < 0) return none;

  const auto b = static_cast<std::size_t>(best);
  double good = grid[b];
  double bad = b + 1 < grid.size() ? grid[b + 1] : 1.0;
  bisect_predicate(feasible, good, bad, opt.relative_width);

  Certificate cert;
  cert.variant = variant;
  cert.inputs = in;
  cert.rate = good;
  cert.feasible_hi = good;
  const auto sides = condition_lhs_rhs(good, in, variant);
  cert.margin = sides.margin();
  cert.psi_bound = sides.psi_bound;

  std::size_t lo = b;
  while (lo > 0 && ok[lo - 1]) --lo;
  if (lo == 0) {
    cert.feasible_lo = grid[0];
    cert.lower_is_grid_floor = true;
  } else {
    double lgood = grid[lo];
    double lbad = grid[lo - 1];
    bisect_predicate(feasible, lgood, lbad, opt.relative_width);
    cert.feasible_lo = lgood;
  }
  return cert;
}

}  // namespace csdelay
