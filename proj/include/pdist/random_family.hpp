#pragma once

// Seeded generator of random instances used by property tests and by the
// CLI's --seed replay. The family:
//   - singular points drawn from {-1, 0, 1}, at most `max_points` of them;
//   - pieces are polynomials of degree <= 3 with coefficients in [-1, 1],
//     sometimes times sin(x), cos(x) or exp(x/2), sometimes zero;
//   - at each singular point, delta terms of order <= `max_delta_order`
//     with complex coefficients in the unit square.

#include <cstdint>
#include <random>
#include <vector>

#include "pdist/piecewise.hpp"

namespace pdist {

struct RandomFamily {
  explicit RandomFamily(std::uint64_t seed) : rng(seed) {}

  int max_points = 2;
  int max_delta_order = 3;
  double delta_probability = 0.6;
  std::mt19937_64 rng;

  double uniform(double lo = -1.0, double hi = 1.0);
  int integer(int lo, int hi);
  Complex complex_unit();

  SmoothExpr smooth();
  /// Breakpoints drawn from `candidates` (default {-1, 0, 1}).
  PiecewiseDist dist(const std::vector<double>& candidates = {-1.0, 0.0, 1.0});
  /// Piecewise function with a single breakpoint at x0 and no deltas.
  PiecewiseDist two_sided(double x0 = 0.0);
  Eigen::MatrixXcd matrix(int rows, int cols);
};

}  // namespace pdist
