#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "csdelay/core/frame.hpp"

namespace csdelay {

struct Diameters {
  double d_x = 0.0;
  double d_v = 0.0;
};

/// Largest pairwise Euclidean distance among `agents` points, with the maximizing pair.
struct PairwiseMax {
  double value = 0.0;
  std::size_t i = 0;
  std::size_t k = 0;
};

inline PairwiseMax max_pairwise_distance(std::span<const double> points, std::size_t agents,
                                         std::size_t dim) {
  PairwiseMax best;
  double best2 = 0.0;
  for (std::size_t i = 0; i < agents; ++i) {
    for (std::size_t k = i + 1; k < agents; ++k) {
      double s2 = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = points[i * dim + c] - points[k * dim + c];
        s2 += diff * diff;
      }
      if (s2 > best2) {
        best2 = s2;
        best.i = i;
        best.k = k;
      }
    }
  }
  best.value = std::sqrt(best2);
  return best;
}

inline Diameters diameters(const Frame& f) {
  return {max_pairwise_distance(f.positions, f.agents, f.dim).value,
          max_pairwise_distance(f.velocities, f.agents, f.dim).value};
}

/// Total momentum sum_i v_i (unit masses).
inline std::vector<double> total_momentum(const Frame& f) {
  std::vector<double> p(f.dim, 0.0);
  for (std::size_t i = 0; i < f.agents; ++i)
    for (std::size_t c = 0; c < f.dim; ++c) p[c] += f.velocities[i * f.dim + c];
  return p;
}

}  // namespace csdelay
