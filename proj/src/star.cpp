#include "pdist/star.hpp"

#include <algorithm>
#include <cmath>

#include "pdist/errors.hpp"
#include "pdist/quadrature.hpp"

namespace pdist {
namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// Adds c * g * delta^(j)(x - a) into coefs.
void add_dual(std::vector<Complex>& coefs, Complex c, const Eigen::VectorXcd& jet, int j) {
  if (coefs.size() < static_cast<std::size_t>(j) + 1) coefs.resize(static_cast<std::size_t>(j) + 1, 0.0);
  for (int k = 0; k <= j; ++k) {
    const double sign = (j - k) % 2 ? -1.0 : 1.0;
    coefs[static_cast<std::size_t>(k)] += c * sign * binomial(j, k) * jet[j - k];
  }
}

int top_order(const std::vector<Complex>& coefs) {
  for (int j = static_cast<int>(coefs.size()) - 1; j >= 0; --j) {
    if (coefs[static_cast<std::size_t>(j)] != 0.0) return j;
  }
  return -1;
}

}  // namespace

PointSet::PointSet(std::initializer_list<double> pts) : PointSet(std::vector<double>(pts)) {}

PointSet::PointSet(std::vector<double> pts) : pts_(std::move(pts)) {
  std::sort(pts_.begin(), pts_.end());
  if (std::adjacent_find(pts_.begin(), pts_.end()) != pts_.end()) {
    throw ConstructionError("interface points must be distinct");
  }
}

bool PointSet::contains(double x) const { return std::binary_search(pts_.begin(), pts_.end(), x); }

std::vector<Complex> smooth_times_delta(const SmoothExpr& g, int j, double a) {
  std::vector<Complex> coefs;
  add_dual(coefs, 1.0, eval_jet(g, a, j), j);
  return coefs;
}

PiecewiseDist star(const PiecewiseDist& f, const PiecewiseDist& g) {
  const std::vector<double> pts = union_points(f, g);
  const PiecewiseDist rf = refine(f, pts);
  const PiecewiseDist rg = refine(g, pts);
  std::vector<SmoothExpr> pieces(rf.pieces().size());
  for (std::size_t i = 0; i < pieces.size(); ++i) pieces[i] = rf.pieces()[i] * rg.pieces()[i];

  // Deltas of f pick up the piece of g on their right, deltas of g the piece
  // of f on their left.
  std::vector<std::vector<Complex>> deltas(pts.size());
  for (std::size_t b = 0; b < pts.size(); ++b) {
    const auto& fd = rf.delta_table()[b];
    const auto& gd = rg.delta_table()[b];
    const int fo = top_order(fd);
    const int go = top_order(gd);
    if (fo >= 0) {
      const Eigen::VectorXcd jet = eval_jet(rg.pieces()[b + 1], pts[b], fo);
      for (int j = 0; j <= fo; ++j) {
        if (fd[static_cast<std::size_t>(j)] != 0.0) add_dual(deltas[b], fd[static_cast<std::size_t>(j)], jet, j);
      }
    }
    if (go >= 0) {
      const Eigen::VectorXcd jet = eval_jet(rf.pieces()[b], pts[b], go);
      for (int j = 0; j <= go; ++j) {
        if (gd[static_cast<std::size_t>(j)] != 0.0) add_dual(deltas[b], gd[static_cast<std::size_t>(j)], jet, j);
      }
    }
  }
  return canonicalize(pts, std::move(pieces), std::move(deltas));
}

PiecewiseDist delta_shift(Side side, int n, double x0, const PiecewiseDist& f) {
  if (n < 0) throw ConstructionError("delta order must be non-negative");
  const Eigen::VectorXcd jet = lateral_trace(f, x0, side, n + 1);
  std::vector<Complex> coefs;
  add_dual(coefs, 1.0, jet, n);
  return canonicalize({x0}, {SmoothExpr(), SmoothExpr()}, {coefs});
}

PiecewiseDist gamma(int n, double x0, const PiecewiseDist& f) {
  if (n < 0) throw ConstructionError("delta order must be non-negative");
  const Eigen::VectorXcd jump =
      lateral_trace(f, x0, Side::minus, n + 1) - lateral_trace(f, x0, Side::plus, n + 1);
  std::vector<Complex> coefs;
  add_dual(coefs, 1.0, jump, n);
  return canonicalize({x0}, {SmoothExpr(), SmoothExpr()}, {coefs});
}

PiecewiseDist tilde_d(const PiecewiseDist& f, const PointSet& interfaces, int k) {
  if (k < 0) throw ConstructionError("derivative order must be non-negative");
  PiecewiseDist cur = f;
  for (int step = 0; step < k; ++step) {
    PiecewiseDist next = derivative(cur, 1);
    for (double p : interfaces) next = next + gamma(0, p, cur);
    cur = std::move(next);
  }
  return cur;
}

PiecewiseDist tilde_d_binomial(const PiecewiseDist& f, int n, double x0) {
  if (n < 1) throw ConstructionError("binomial expansion needs a positive order");
  std::vector<PiecewiseDist> d{f};
  for (int j = 1; j <= n; ++j) d.push_back(derivative(d.back(), 1));
  PiecewiseDist out = d[static_cast<std::size_t>(n)];
  for (int j = 1; j <= n; ++j) {
    out = out + Complex(binomial(n, j)) * gamma(j - 1, x0, d[static_cast<std::size_t>(n - j)]);
  }
  return out;
}

double bump_mass() {
  static const double mass = [] {
    const SmoothExpr t = SmoothExpr::x();
    const SmoothExpr body = exp(SmoothExpr(-1.0) / (1.0 - t * t));
    QuadratureOptions opts;
    opts.abs_tol = 1e-13;
    return integrate([&](double x) { return body(x); }, -1.0, 1.0, opts).value.real();
  }();
  return mass;
}

PiecewiseDist mollifier_apply(Side side, int n, double eps, const PiecewiseDist& f, double x0) {
  if (!(eps > 0)) throw ConstructionError("mollifier width must be positive");
  if (n < 0) throw ConstructionError("derivative order must be non-negative");
  const double center = side == Side::plus ? x0 + eps : x0 - eps;
  const double lo = center - eps;
  const double hi = center + eps;
  const SmoothExpr t = (SmoothExpr::x() - center) / eps;
  const SmoothExpr bump = exp(SmoothExpr(-1.0) / (1.0 - t * t)) / (eps * bump_mass());
  const SmoothExpr v = diff(bump, n);

  std::vector<double> support{lo, hi};
  const PiecewiseDist rf = refine(f, support);
  const auto& xs = rf.breakpoints();
  std::vector<SmoothExpr> pieces(rf.pieces().size());
  std::vector<std::vector<Complex>> deltas(xs.size());
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const bool inside = i > 0 && i < xs.size() && xs[i - 1] >= lo && xs[i] <= hi;
    if (inside) pieces[i] = v * rf.pieces()[i];
  }
  for (std::size_t b = 0; b < xs.size(); ++b) {
    if (!(xs[b] > lo && xs[b] < hi)) continue;
    const auto& fd = rf.delta_table()[b];
    const int fo = top_order(fd);
    if (fo < 0) continue;
    const Eigen::VectorXcd jet = eval_jet(v, xs[b], fo);
    for (int j = 0; j <= fo; ++j) {
      if (fd[static_cast<std::size_t>(j)] != 0.0) add_dual(deltas[b], fd[static_cast<std::size_t>(j)], jet, j);
    }
  }
  return canonicalize(xs, std::move(pieces), std::move(deltas));
}

}  // namespace pdist
