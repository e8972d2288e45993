#pragma once

// Star product on piecewise distributions and the operators derived from it:
// shifting deltas, their difference Gamma, and the modified derivative.

#include <initializer_list>
#include <vector>

#include "pdist/piecewise.hpp"

namespace pdist {

/// Finite sorted set of points without duplicates.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::initializer_list<double> pts);  // NOLINT(google-explicit-constructor)
  explicit PointSet(std::vector<double> pts);

  const std::vector<double>& points() const { return pts_; }
  bool contains(double x) const;
  std::size_t size() const { return pts_.size(); }
  auto begin() const { return pts_.begin(); }
  auto end() const { return pts_.end(); }

 private:
  std::vector<double> pts_;
};

/// Coefficients c_k of g * delta^(j)(x - a) = sum_k c_k delta^(k)(x - a), for
/// smooth g.
std::vector<Complex> smooth_times_delta(const SmoothExpr& g, int j, double a);

PiecewiseDist star(const PiecewiseDist& f, const PiecewiseDist& g);

/// plus: delta^(n)(x - x0) * F; minus: F * delta^(n)(x - x0).
PiecewiseDist delta_shift(Side side, int n, double x0, const PiecewiseDist& f);

/// (shift_minus - shift_plus) F.
PiecewiseDist gamma(int n, double x0, const PiecewiseDist& f);

/// k-fold application of D + sum_{p in I} gamma(0, p, .).
PiecewiseDist tilde_d(const PiecewiseDist& f, const PointSet& interfaces, int k = 1);

/// D^n F + sum_{j=1..n} C(n,j) gamma(j-1, x0, D^(n-j) F).
PiecewiseDist tilde_d_binomial(const PiecewiseDist& f, int n, double x0 = 0.0);

/// Normalized even bump of half-width eps, shifted by eps towards `side`, its
/// n-th derivative multiplied pointwise into F. Support is [x0, x0 + 2 eps]
/// for plus and [x0 - 2 eps, x0] for minus.
PiecewiseDist mollifier_apply(Side side, int n, double eps, const PiecewiseDist& f,
                              double x0 = 0.0);

/// Integral of exp(-1/(1-t^2)) over (-1, 1).
double bump_mass();

}  // namespace pdist
