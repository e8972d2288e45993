#pragma once

// Explicit Dormand-Prince 5(4) integrator with step size control and the
// standard fourth-order continuous extension.

#include <algorithm>
#include <iterator>
#include <cmath>
#include <utility>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pdist/errors.hpp"

namespace pdist {

struct Rk45Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  /// 0 picks an initial step from the problem scale.
  double initial_step = 0.0;
  long max_steps = 2'000'000;
};

template <typename Scalar>
class DenseTrajectory {
 public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Step {
    double x;
    double h;
    Vec y0;
    Vec y1;
    // Continuous extension coefficients.
    Vec r2, r3, r4, r5;
  };

  double start() const { return x0_; }
  double end() const { return x1_; }
  const Vec& initial_state() const { return y0_; }
  const Vec& final_state() const { return steps_.empty() ? y0_ : steps_.back().y1; }
  std::size_t step_count() const { return steps_.size(); }

  bool covers(double x) const { return std::min(x0_, x1_) <= x && x <= std::max(x0_, x1_); }

  Vec operator()(double x) const {
    if (!covers(x)) {
      throw EvaluationError("x=" + std::to_string(x) + " lies outside the integrated range [" +
                            std::to_string(std::min(x0_, x1_)) + ", " +
                            std::to_string(std::max(x0_, x1_)) + "]");
    }
    if (steps_.empty() || x == x0_) return y0_;
    const double dir = x1_ >= x0_ ? 1.0 : -1.0;
    // First step whose far end reaches x.
    auto it = std::lower_bound(steps_.begin(), steps_.end(), x, [dir](const Step& s, double v) {
      return dir * (s.x + s.h) < dir * v;
    });
    if (it == steps_.end()) it = std::prev(steps_.end());
    const Step& s = *it;
    if (x == s.x + s.h) return s.y1;
    const double t = (x - s.x) / s.h;
    const double t1 = 1.0 - t;
    return s.y0 + t * (s.r2 + t1 * (s.r3 + t * (s.r4 + t1 * s.r5)));
  }

  /// Integrates y' = f(x, y) from x0 to x1 (either direction).
  template <typename F>
  static DenseTrajectory integrate(F&& f, double x0, const Vec& y0, double x1, const Rk45Options& opts);

 private:
  double x0_ = 0.0;
  double x1_ = 0.0;
  Vec y0_;
  std::vector<Step> steps_;
};

template <typename Scalar>
template <typename F>
DenseTrajectory<Scalar> DenseTrajectory<Scalar>::integrate(F&& f, double x0, const Vec& y0, double x1,
                                                           const Rk45Options& opts) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                   d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                   d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  DenseTrajectory<Scalar> traj;
  traj.x0_ = x0;
  traj.x1_ = x1;
  traj.y0_ = y0;
  if (x1 == x0) return traj;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  auto scale = [&](const Vec& a, const Vec& b) {
    Eigen::VectorXd s(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      s[i] = opts.atol + opts.rtol * std::max(std::abs(a[i]), std::abs(b[i]));
    }
    return s;
  };
  auto norm = [](const Vec& v, const Eigen::VectorXd& s) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]) / s[i], 2);
    return v.size() ? std::sqrt(acc / static_cast<double>(v.size())) : 0.0;
  };

  double x = x0;
  Vec y = y0;
  Vec k1 = f(x, y);
  double h = opts.initial_step;
  if (h <= 0.0) {
    // Initial step guess from the derivative scale.
    const auto s = scale(y, y);
    const double d0 = norm(y, s);
    const double d1n = norm(k1, s);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, span);
  }
  long steps = 0;
  bool last_rejected = false;
  while (dir * (x1 - x) > 0.0) {
    if (++steps > opts.max_steps) {
      throw NumericalError("integrator exceeded " + std::to_string(opts.max_steps) + " steps at x=" +
                           std::to_string(x));
    }
    if (h < 1e-14 * std::max(1.0, std::abs(x))) {
      throw NumericalError("step size underflow at x=" + std::to_string(x) +
                           "; the problem may be stiff or singular");
    }
    const bool final_step = h >= std::abs(x1 - x);
    const double hs = final_step ? x1 - x : dir * h;
    const Vec k2 = f(x + c2 * hs, Vec(y + hs * (a21 * k1)));
    const Vec k3 = f(x + c3 * hs, Vec(y + hs * (a31 * k1 + a32 * k2)));
    const Vec k4 = f(x + c4 * hs, Vec(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
    const Vec k5 = f(x + c5 * hs, Vec(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const Vec k6 = f(x + hs, Vec(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const Vec y1 = y + hs * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    const double xn = final_step ? x1 : x + hs;
    const Vec k7 = f(xn, y1);
    const Vec err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = norm(err, scale(y, y1));
    if (!std::isfinite(en)) {
      h *= 0.2;
      last_rejected = true;
      continue;
    }
    if (en <= 1.0) {
      Step s;
      s.x = x;
      s.h = hs;
      s.y0 = y;
      s.y1 = y1;
      s.r2 = y1 - y;
      s.r3 = hs * k1 - s.r2;
      s.r4 = s.r2 - hs * k7 - s.r3;
      s.r5 = hs * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      traj.steps_.push_back(std::move(s));
      x = xn;
      y = y1;
      k1 = k7;
      double fac = en == 0.0 ? 5.0 : 0.9 * std::pow(en, -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 5.0);
      h = std::abs(hs) * fac;
      last_rejected = false;
    } else {
      h = std::abs(hs) * std::max(0.2, 0.9 * std::pow(en, -0.2));
      last_rejected = true;
    }
  }
  return traj;
}

template <typename Scalar, typename F>
DenseTrajectory<Scalar> dormand_prince(F&& f, double x0, const typename DenseTrajectory<Scalar>::Vec& y0,
                                       double x1, const Rk45Options& opts = {}) {
  return DenseTrajectory<Scalar>::integrate(std::forward<F>(f), x0, y0, x1, opts);
}

}  // namespace pdist
