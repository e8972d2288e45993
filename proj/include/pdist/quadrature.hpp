#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with interval bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <vector>

#include "pdist/errors.hpp"

namespace pdist {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_panels = 1 << 14;
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value{};
  double error = 0.0;
  int panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule at Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename Scalar>
struct Panel {
  double a, b;
  Scalar value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Scalar fc = f(center);
  Scalar kronrod = fc * kKronrodWeights[7];
  Scalar gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const Scalar s = f(center - dx) + f(center + dx);
    kronrod += s * kKronrodWeights[j];
    if (j % 2 == 1) gauss += s * kGaussWeights[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Integrates f over [a, b]; the panel with the largest error estimate is
/// bisected until the summed estimate drops below `abs_tol`. Throws
/// NumericalError when the panel cap is reached first.
template <typename Scalar = std::complex<double>, typename F>
QuadratureResult<Scalar> integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  if (!(b > a)) return {};
  std::priority_queue<detail::Panel<Scalar>> panels;
  auto first = detail::gauss_kronrod_15<Scalar>(f, a, b);
  double total_error = first.error;
  panels.push(first);
  int count = 1;
  while (total_error > opts.abs_tol) {
    if (count >= opts.max_panels) {
      throw NumericalError("quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "] after " + std::to_string(count) +
                           " panels; achieved error estimate " + std::to_string(total_error));
    }
    detail::Panel<Scalar> worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gauss_kronrod_15<Scalar>(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15<Scalar>(f, mid, worst.b);
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++count;
    // Guard against drift in the running sum once the panel errors are tiny.
    if (total_error <= opts.abs_tol) {
      double exact = 0.0;
      auto copy = panels;
      while (!copy.empty()) {
        exact += copy.top().error;
        copy.pop();
      }
      total_error = exact;
    }
  }
  QuadratureResult<Scalar> result;
  result.error = total_error;
  result.panels = count;
  while (!panels.empty()) {
    result.value += panels.top().value;
    panels.pop();
  }
  return result;
}

}  // namespace pdist
