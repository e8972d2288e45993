#pragma once

// Elements of the algebra of piecewise smooth functions plus finitely many
// Dirac delta derivatives:
//
//   F = sum_i f_i chi_(x_i, x_{i+1}) + sum_i sum_j F_ij delta^(j)(x - x_i)
//
// with x_0 = -inf and x_{m+1} = +inf.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdist/smooth_expr.hpp"

namespace pdist {

enum class Side { minus, plus };

struct DeltaTerm {
  std::size_t point_index;
  int order;
  Complex coefficient;
};

struct CanonicalOptions {
  /// Largest delta derivative order accepted.
  int max_delta_order = 32;
  /// Jet order used to decide whether a breakpoint is removable is
  /// max(32, highest delta order + extra_jet_order).
  int extra_jet_order = 0;
};

class PiecewiseDist {
 public:
  /// The zero distribution.
  PiecewiseDist();
  PiecewiseDist(SmoothExpr smooth);  // NOLINT(google-explicit-constructor)
  PiecewiseDist(Complex c);          // NOLINT(google-explicit-constructor)
  PiecewiseDist(double c);           // NOLINT(google-explicit-constructor)

  /// Builds without canonicalizing; only checks list lengths, ordering and
  /// delta indices. `deltas[b][j]` is the coefficient of delta^(j)(x - x_b).
  static PiecewiseDist from_parts(std::vector<double> breakpoints, std::vector<SmoothExpr> pieces,
                                  std::vector<std::vector<Complex>> deltas);

  static PiecewiseDist heaviside(double at = 0.0);
  static PiecewiseDist heaviside_minus(double at = 0.0);
  static PiecewiseDist delta(int order = 0, double at = 0.0, Complex coefficient = 1.0);
  /// chi_(a, b) * f.
  static PiecewiseDist interval(double a, double b, const SmoothExpr& f = 1.0);

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<SmoothExpr>& pieces() const { return pieces_; }
  /// Per breakpoint, coefficients indexed by derivative order.
  const std::vector<std::vector<Complex>>& delta_table() const { return deltas_; }
  std::vector<DeltaTerm> delta_terms() const;

  /// Coefficient of delta^(order)(x - x0); zero if absent.
  Complex delta_coefficient(double x0, int order) const;

  /// Piece adjacent to x0 on the given side.
  const SmoothExpr& piece_at(double x0, Side side) const;

  int max_delta_order() const;
  bool has_deltas() const;
  bool is_zero() const;
  /// The delta part removed.
  PiecewiseDist regular_part() const;
  /// Only the delta part.
  PiecewiseDist singular_part() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<SmoothExpr> pieces_;
  std::vector<std::vector<Complex>> deltas_;
};

/// Canonical form: zero coefficients dropped, breakpoints sorted, removable
/// breakpoints merged. Throws ConstructionError on duplicate breakpoints.
PiecewiseDist canonicalize(std::vector<double> breakpoints, std::vector<SmoothExpr> pieces,
                           std::vector<std::vector<Complex>> deltas,
                           const CanonicalOptions& opts = {});
PiecewiseDist canonicalize(const PiecewiseDist& f, const CanonicalOptions& opts = {});

/// Value-identical distribution whose breakpoints include `points`.
PiecewiseDist refine(const PiecewiseDist& f, std::span<const double> points);

/// k-th distributional derivative.
PiecewiseDist derivative(const PiecewiseDist& f, int k = 1);

/// (f(x0), f'(x0), ..., f^(count-1)(x0)) of the piece on `side` of x0.
Eigen::VectorXcd lateral_trace(const PiecewiseDist& f, double x0, Side side, int count);

PiecewiseDist operator+(const PiecewiseDist& a, const PiecewiseDist& b);
PiecewiseDist operator-(const PiecewiseDist& a, const PiecewiseDist& b);
PiecewiseDist operator-(const PiecewiseDist& a);
PiecewiseDist operator*(Complex c, const PiecewiseDist& f);

/// Breakpoints of both operands, merged and sorted.
std::vector<double> union_points(const PiecewiseDist& a, const PiecewiseDist& b);

/// Compactly supported test function. The body is only consulted on the
/// support; outside it the test function is identically zero.
class TestFn {
 public:
  /// Checks at 16 points next to each endpoint (inside the support) that the
  /// body and its derivatives up to `flat_order` are below 1e-14.
  TestFn(SmoothExpr body, double a, double b, int flat_order = 3);

  const SmoothExpr& body() const { return body_; }
  double lower() const { return a_; }
  double upper() const { return b_; }

  Complex operator()(double x) const;
  /// (g(x), ..., g^(k)(x)); zero outside the open support.
  Eigen::VectorXcd jet(double x, int k) const;
  /// g' with the same support.
  TestFn derivative() const;

  /// exp(-1/(1-((x-center)/radius)^2)) * scale on [center-radius, center+radius].
  static TestFn bump(double center = 0.0, double radius = 1.0, Complex scale = 1.0);

 private:
  TestFn(SmoothExpr body, double a, double b, int flat_order, bool checked);

  SmoothExpr body_;
  double a_;
  double b_;
  int flat_order_;
};

/// <F, g> = sum of piece integrals (adaptive Gauss-Kronrod, 1e-10 absolute)
/// plus sum F_ij (-1)^j g^(j)(x_i).
Complex pair(const PiecewiseDist& f, const TestFn& g);

struct ApproxReport {
  bool equal = true;
  double max_piece_diff = 0.0;
  double max_delta_diff = 0.0;
  std::string detail;
  explicit operator bool() const { return equal; }
};

/// Compares delta coefficients and piece samples (33 interior points per
/// interval, unbounded intervals clipped to [-window, window]). Differences
/// are measured as |a-b| / max(1, |a|, |b|).
ApproxReport approx_equal(const PiecewiseDist& a, const PiecewiseDist& b, double tol,
                          double window = 10.0);

}  // namespace pdist
