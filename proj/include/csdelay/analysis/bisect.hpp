#pragma once

#include <cmath>

namespace csdelay {

/// Shrink [good, bad] around the switch of a boolean predicate.
/// `pred(good)` is assumed true and `pred(bad)` false; the ends may be in either order.
/// Stops once |bad - good| <= rel_width * max(|good|, |bad|) or the midpoint stops moving.
template <class Pred>
void bisect_predicate(Pred&& pred, double& good, double& bad, double rel_width) {
  for (int it = 0; it < 2000; ++it) {
    const double width = std::abs(bad - good);
    if (width <= rel_width * std::fmax(std::abs(good), std::abs(bad))) break;
    const double mid = 0.5 * (good + bad);
    if (mid == good || mid == bad) break;
    if (pred(mid))
      good = mid;
    else
      bad = mid;
  }
}

/// Root of a continuous function with f(pos) > 0 > f(neg), bisected to full precision.
/// Returns whichever final bracket end has the smaller |f|.
template <class F>
double bisect_root(F&& f, double pos, double neg) {
  double fpos = f(pos);
  double fneg = f(neg);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (pos + neg);
    if (mid == pos || mid == neg) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (fm > 0.0) {
      pos = mid;
      fpos = fm;
    } else {
      neg = mid;
      fneg = fm;
    }
  }
  return std::abs(fpos) <= std::abs(fneg) ? pos : neg;
}

}  // namespace csdelay
