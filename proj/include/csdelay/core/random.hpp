#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace csdelay {

/// Seeded generator whose doubles do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform point in the closed ball of the given radius (rejection sampling).
  std::vector<double> in_ball(std::size_t dim, double radius) {
    std::vector<double> p(dim);
    for (;;) {
      double r2 = 0.0;
      for (auto& x : p) {
        x = uniform(-1.0, 1.0);
        r2 += x * x;
      }
      if (r2 <= 1.0) break;
    }
    for (auto& x : p) x *= radius;
    return p;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace csdelay
