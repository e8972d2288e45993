#include "pdist/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "pdist/errors.hpp"
#include "pdist/quadrature.hpp"

namespace pdist {
namespace {

constexpr int kMinMergeJetOrder = 32;
constexpr double kMergeTol = 1e-12;

void trim(std::vector<Complex>& coefs) {
  while (!coefs.empty() && coefs.back() == 0.0) coefs.pop_back();
}

bool all_zero(const std::vector<Complex>& coefs) {
  return std::all_of(coefs.begin(), coefs.end(), [](Complex c) { return c == 0.0; });
}

bool taylor_close(const std::vector<Complex>& l, const std::vector<Complex>& r) {
  for (std::size_t j = 0; j < l.size(); ++j) {
    const double scale = std::max({1.0, std::abs(l[j]), std::abs(r[j])});
    if (std::abs(l[j] - r[j]) > kMergeTol * scale) return false;
  }
  return true;
}

// A breakpoint without deltas is removable when both adjacent pieces have
// matching jets; pieces backed by numeric sources are only merged when they
// are the same leaf.
bool removable(const SmoothExpr& left, const SmoothExpr& right, double at, int jet_order) {
  if (structurally_equal(left, right)) return true;
  if (left.has_source() || right.has_source()) return false;
  try {
    if (!taylor_close(taylor_coefficients(left, at, 3), taylor_coefficients(right, at, 3))) {
      return false;
    }
    return taylor_close(taylor_coefficients(left, at, jet_order),
                        taylor_coefficients(right, at, jet_order));
  } catch (const EvaluationError&) {
    return false;
  }
}

double relative_gap(Complex a, Complex b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- PiecewiseDist

PiecewiseDist::PiecewiseDist() : pieces_{SmoothExpr()} {}
PiecewiseDist::PiecewiseDist(SmoothExpr smooth) : pieces_{std::move(smooth)} {}
PiecewiseDist::PiecewiseDist(Complex c) : PiecewiseDist(SmoothExpr(c)) {}
PiecewiseDist::PiecewiseDist(double c) : PiecewiseDist(SmoothExpr(c)) {}

PiecewiseDist PiecewiseDist::from_parts(std::vector<double> breakpoints,
                                        std::vector<SmoothExpr> pieces,
                                        std::vector<std::vector<Complex>> deltas) {
  if (pieces.size() != breakpoints.size() + 1) {
    throw ConstructionError("expected " + std::to_string(breakpoints.size() + 1) +
                            " pieces for " + std::to_string(breakpoints.size()) +
                            " breakpoints, got " + std::to_string(pieces.size()));
  }
  if (deltas.size() > breakpoints.size()) {
    throw ConstructionError("delta terms reference a breakpoint index out of range");
  }
  deltas.resize(breakpoints.size());
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) {
      throw ConstructionError("breakpoints must be strictly increasing");
    }
  }
  for (double b : breakpoints) {
    if (!std::isfinite(b)) throw ConstructionError("breakpoints must be finite");
  }
  PiecewiseDist f;
  f.breakpoints_ = std::move(breakpoints);
  f.pieces_ = std::move(pieces);
  f.deltas_ = std::move(deltas);
  return f;
}

PiecewiseDist PiecewiseDist::heaviside(double at) {
  return from_parts({at}, {SmoothExpr(), SmoothExpr(1.0)}, {{}});
}

PiecewiseDist PiecewiseDist::heaviside_minus(double at) {
  return from_parts({at}, {SmoothExpr(1.0), SmoothExpr()}, {{}});
}

PiecewiseDist PiecewiseDist::delta(int order, double at, Complex coefficient) {
  if (order < 0) throw ConstructionError("delta order must be non-negative");
  std::vector<Complex> coefs(static_cast<std::size_t>(order) + 1, 0.0);
  coefs.back() = coefficient;
  return canonicalize({at}, {SmoothExpr(), SmoothExpr()}, {coefs});
}

PiecewiseDist PiecewiseDist::interval(double a, double b, const SmoothExpr& f) {
  if (!(a < b)) throw ConstructionError("interval endpoints must satisfy a < b");
  return canonicalize({a, b}, {SmoothExpr(), f, SmoothExpr()}, {});
}

std::vector<DeltaTerm> PiecewiseDist::delta_terms() const {
  std::vector<DeltaTerm> out;
  for (std::size_t b = 0; b < deltas_.size(); ++b) {
    for (std::size_t j = 0; j < deltas_[b].size(); ++j) {
      if (deltas_[b][j] != 0.0) out.push_back({b, static_cast<int>(j), deltas_[b][j]});
    }
  }
  return out;
}

Complex PiecewiseDist::delta_coefficient(double x0, int order) const {
  auto it = std::find(breakpoints_.begin(), breakpoints_.end(), x0);
  if (it == breakpoints_.end() || order < 0) return 0.0;
  const auto& coefs = deltas_[static_cast<std::size_t>(it - breakpoints_.begin())];
  return static_cast<std::size_t>(order) < coefs.size() ? coefs[static_cast<std::size_t>(order)]
                                                        : Complex(0.0);
}

const SmoothExpr& PiecewiseDist::piece_at(double x0, Side side) const {
  auto it = side == Side::plus ? std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x0)
                               : std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x0);
  return pieces_[static_cast<std::size_t>(it - breakpoints_.begin())];
}

int PiecewiseDist::max_delta_order() const {
  int best = -1;
  for (const auto& coefs : deltas_) {
    for (std::size_t j = 0; j < coefs.size(); ++j) {
      if (coefs[j] != 0.0) best = std::max(best, static_cast<int>(j));
    }
  }
  return best;
}

bool PiecewiseDist::has_deltas() const {
  return std::any_of(deltas_.begin(), deltas_.end(), [](const auto& c) { return !all_zero(c); });
}

bool PiecewiseDist::is_zero() const {
  return !has_deltas() &&
         std::all_of(pieces_.begin(), pieces_.end(), [](const SmoothExpr& p) { return p.is_zero(); });
}

PiecewiseDist PiecewiseDist::regular_part() const {
  return canonicalize(breakpoints_, pieces_, {});
}

PiecewiseDist PiecewiseDist::singular_part() const {
  return canonicalize(breakpoints_, std::vector<SmoothExpr>(pieces_.size()), deltas_);
}

// ---------------------------------------------------------------- canonical form

PiecewiseDist canonicalize(std::vector<double> breakpoints, std::vector<SmoothExpr> pieces,
                           std::vector<std::vector<Complex>> deltas, const CanonicalOptions& opts) {
  if (pieces.size() != breakpoints.size() + 1) {
    throw ConstructionError("expected " + std::to_string(breakpoints.size() + 1) +
                            " pieces for " + std::to_string(breakpoints.size()) +
                            " breakpoints, got " + std::to_string(pieces.size()));
  }
  if (deltas.size() > breakpoints.size()) {
    throw ConstructionError("delta terms reference a breakpoint index out of range");
  }
  deltas.resize(breakpoints.size());

  // Breakpoints are sorted together with their delta terms; pieces are taken
  // to be listed left to right already.
  std::vector<std::size_t> order(breakpoints.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return breakpoints[i] < breakpoints[j]; });
  std::vector<double> xs;
  std::vector<std::vector<Complex>> ds;
  xs.reserve(order.size());
  ds.reserve(order.size());
  for (std::size_t i : order) {
    if (!std::isfinite(breakpoints[i])) throw ConstructionError("breakpoints must be finite");
    if (!xs.empty() && xs.back() == breakpoints[i]) {
      throw ConstructionError("duplicate breakpoint " + format_real(breakpoints[i]));
    }
    xs.push_back(breakpoints[i]);
    ds.push_back(std::move(deltas[i]));
  }

  int max_order = -1;
  for (auto& coefs : ds) {
    trim(coefs);
    max_order = std::max(max_order, static_cast<int>(coefs.size()) - 1);
  }
  if (max_order > opts.max_delta_order) {
    throw ConstructionError("delta order " + std::to_string(max_order) + " exceeds the cap of " +
                            std::to_string(opts.max_delta_order));
  }
  const int jet_order = std::max(kMinMergeJetOrder, max_order + opts.extra_jet_order);

  std::vector<double> out_x;
  std::vector<SmoothExpr> out_pieces{pieces[0]};
  std::vector<std::vector<Complex>> out_d;
  for (std::size_t b = 0; b < xs.size(); ++b) {
    const SmoothExpr& right = pieces[b + 1];
    if (ds[b].empty() && removable(out_pieces.back(), right, xs[b], jet_order)) continue;
    out_x.push_back(xs[b]);
    out_d.push_back(std::move(ds[b]));
    out_pieces.push_back(right);
  }
  return PiecewiseDist::from_parts(std::move(out_x), std::move(out_pieces), std::move(out_d));
}

PiecewiseDist canonicalize(const PiecewiseDist& f, const CanonicalOptions& opts) {
  return canonicalize(f.breakpoints(), f.pieces(), f.delta_table(), opts);
}

PiecewiseDist refine(const PiecewiseDist& f, std::span<const double> points) {
  std::vector<double> extra(points.begin(), points.end());
  std::sort(extra.begin(), extra.end());
  extra.erase(std::unique(extra.begin(), extra.end()), extra.end());

  const auto& xs = f.breakpoints();
  std::vector<double> out_x;
  std::vector<SmoothExpr> out_pieces;
  std::vector<std::vector<Complex>> out_d;
  std::size_t i = 0;
  std::size_t k = 0;
  out_pieces.push_back(f.pieces()[0]);
  while (i < xs.size() || k < extra.size()) {
    if (k < extra.size() && (i == xs.size() || extra[k] < xs[i])) {
      out_x.push_back(extra[k++]);
      out_d.emplace_back();
      out_pieces.push_back(out_pieces.back());
    } else {
      if (k < extra.size() && extra[k] == xs[i]) ++k;
      out_x.push_back(xs[i]);
      out_d.push_back(f.delta_table()[i]);
      out_pieces.push_back(f.pieces()[i + 1]);
      ++i;
    }
  }
  return PiecewiseDist::from_parts(std::move(out_x), std::move(out_pieces), std::move(out_d));
}

std::vector<double> union_points(const PiecewiseDist& a, const PiecewiseDist& b) {
  std::vector<double> pts;
  std::set_union(a.breakpoints().begin(), a.breakpoints().end(), b.breakpoints().begin(),
                 b.breakpoints().end(), std::back_inserter(pts));
  return pts;
}

// ---------------------------------------------------------------- calculus

PiecewiseDist derivative(const PiecewiseDist& f, int k) {
  if (k < 0) throw ConstructionError("derivative order must be non-negative");
  PiecewiseDist cur = f;
  for (int step = 0; step < k; ++step) {
    const auto& xs = cur.breakpoints();
    const auto& ps = cur.pieces();
    std::vector<SmoothExpr> pieces;
    pieces.reserve(ps.size());
    for (const auto& p : ps) pieces.push_back(diff(p));
    std::vector<std::vector<Complex>> deltas(xs.size());
    for (std::size_t b = 0; b < xs.size(); ++b) {
      const auto& old = cur.delta_table()[b];
      deltas[b].assign(old.size() + 1, 0.0);
      std::copy(old.begin(), old.end(), deltas[b].begin() + 1);
      deltas[b][0] = ps[b + 1](xs[b]) - ps[b](xs[b]);
    }
    cur = canonicalize(xs, std::move(pieces), std::move(deltas));
  }
  return cur;
}

Eigen::VectorXcd lateral_trace(const PiecewiseDist& f, double x0, Side side, int count) {
  if (count <= 0) return Eigen::VectorXcd(0);
  return eval_jet(f.piece_at(x0, side), x0, count - 1);
}

// ---------------------------------------------------------------- linear structure

PiecewiseDist operator+(const PiecewiseDist& a, const PiecewiseDist& b) {
  const std::vector<double> pts = union_points(a, b);
  const PiecewiseDist ra = refine(a, pts);
  const PiecewiseDist rb = refine(b, pts);
  std::vector<SmoothExpr> pieces(ra.pieces().size());
  for (std::size_t i = 0; i < pieces.size(); ++i) pieces[i] = ra.pieces()[i] + rb.pieces()[i];
  std::vector<std::vector<Complex>> deltas(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& da = ra.delta_table()[i];
    const auto& db = rb.delta_table()[i];
    deltas[i].assign(std::max(da.size(), db.size()), 0.0);
    for (std::size_t j = 0; j < da.size(); ++j) deltas[i][j] += da[j];
    for (std::size_t j = 0; j < db.size(); ++j) deltas[i][j] += db[j];
  }
  return canonicalize(pts, std::move(pieces), std::move(deltas));
}

PiecewiseDist operator*(Complex c, const PiecewiseDist& f) {
  if (c == 0.0) return {};
  std::vector<SmoothExpr> pieces;
  pieces.reserve(f.pieces().size());
  for (const auto& p : f.pieces()) pieces.push_back(SmoothExpr(c) * p);
  auto deltas = f.delta_table();
  for (auto& coefs : deltas) {
    for (auto& v : coefs) v *= c;
  }
  return canonicalize(f.breakpoints(), std::move(pieces), std::move(deltas));
}

PiecewiseDist operator-(const PiecewiseDist& a) { return Complex(-1.0) * a; }
PiecewiseDist operator-(const PiecewiseDist& a, const PiecewiseDist& b) { return a + (-b); }

// ---------------------------------------------------------------- test functions

TestFn::TestFn(SmoothExpr body, double a, double b, int flat_order)
    : TestFn(std::move(body), a, b, flat_order, true) {}

TestFn::TestFn(SmoothExpr body, double a, double b, int flat_order, bool checked)
    : body_(std::move(body)), a_(a), b_(b), flat_order_(flat_order) {
  if (!(a < b)) throw ConstructionError("test function support must satisfy a < b");
  if (!checked) return;
  const double h = 1e-3 * (b - a);
  for (int k = 1; k <= 16; ++k) {
    for (double x : {a + h * k / 16.0, b - h * k / 16.0}) {
      Eigen::VectorXcd jet;
      try {
        jet = eval_jet(body_, x, flat_order_);
      } catch (const EvaluationError& e) {
        throw ConstructionError(std::string("test function body cannot be evaluated near its "
                                            "support endpoints: ") +
                                e.what());
      }
      if (jet.cwiseAbs().maxCoeff() > 1e-14) {
        throw ConstructionError("test function body is not flat at x=" + format_real(x) +
                                "; it does not vanish outside [" + format_real(a) + ", " +
                                format_real(b) + "]");
      }
    }
  }
}

Complex TestFn::operator()(double x) const {
  if (x <= a_ || x >= b_) return 0.0;
  return body_(x);
}

Eigen::VectorXcd TestFn::jet(double x, int k) const {
  if (x <= a_ || x >= b_) return Eigen::VectorXcd::Zero(k + 1);
  return eval_jet(body_, x, k);
}

TestFn TestFn::derivative() const {
  return TestFn(diff(body_), a_, b_, std::max(0, flat_order_ - 1), false);
}

TestFn TestFn::bump(double center, double radius, Complex scale) {
  if (!(radius > 0)) throw ConstructionError("bump radius must be positive");
  const SmoothExpr t = (SmoothExpr::x() - center) / radius;
  const SmoothExpr body = SmoothExpr(scale) * exp(SmoothExpr(-1.0) / (1.0 - t * t));
  return TestFn(body, center - radius, center + radius);
}

Complex pair(const PiecewiseDist& f, const TestFn& g) {
  const auto& xs = f.breakpoints();
  const auto& ps = f.pieces();
  Complex total = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i].is_zero()) continue;
    const double lo = std::max(g.lower(), i == 0 ? -std::numeric_limits<double>::infinity() : xs[i - 1]);
    const double hi = std::min(g.upper(), i == xs.size() ? std::numeric_limits<double>::infinity() : xs[i]);
    if (!(hi > lo)) continue;
    const SmoothExpr& piece = ps[i];
    const SmoothExpr& body = g.body();
    total += integrate([&](double x) { return piece(x) * body(x); }, lo, hi).value;
  }
  for (const auto& d : f.delta_terms()) {
    const Eigen::VectorXcd jet = g.jet(xs[d.point_index], d.order);
    total += d.coefficient * (d.order % 2 ? -1.0 : 1.0) * jet[d.order];
  }
  return total;
}

// ---------------------------------------------------------------- comparison

ApproxReport approx_equal(const PiecewiseDist& a, const PiecewiseDist& b, double tol, double window) {
  ApproxReport report;
  const std::vector<double> pts = union_points(a, b);
  const PiecewiseDist ra = refine(a, pts);
  const PiecewiseDist rb = refine(b, pts);
  auto fail = [&](std::string detail) {
    if (report.equal) report.detail = std::move(detail);
    report.equal = false;
  };

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& da = ra.delta_table()[i];
    const auto& db = rb.delta_table()[i];
    for (std::size_t j = 0; j < std::max(da.size(), db.size()); ++j) {
      const Complex ca = j < da.size() ? da[j] : Complex(0.0);
      const Complex cb = j < db.size() ? db[j] : Complex(0.0);
      const double gap = relative_gap(ca, cb);
      report.max_delta_diff = std::max(report.max_delta_diff, gap);
      if (gap > tol) {
        fail("delta (" + std::to_string(i) + "," + std::to_string(j) + ") mismatch " +
             fmt(std::abs(ca - cb)) + " at x=" + fmt(pts[i]));
      }
    }
  }

  constexpr int kSamples = 33;
  for (std::size_t i = 0; i <= pts.size(); ++i) {
    double lo;
    double hi;
    if (pts.empty()) {
      lo = -window;
      hi = window;
    } else if (i == 0) {
      hi = pts.front();
      lo = hi > -window ? -window : hi - 1.0;
      hi = std::min(hi, std::max(lo + 1.0, window));
    } else if (i == pts.size()) {
      lo = pts.back();
      hi = lo < window ? window : lo + 1.0;
      lo = std::max(lo, std::min(hi - 1.0, -window));
    } else {
      lo = pts[i - 1];
      hi = pts[i];
    }
    const SmoothExpr& pa = ra.pieces()[i];
    const SmoothExpr& pb = rb.pieces()[i];
    if (structurally_equal(pa, pb)) continue;
    for (int k = 0; k < kSamples; ++k) {
      const double x = lo + (hi - lo) * (k + 0.5) / kSamples;
      double gap;
      try {
        gap = relative_gap(pa(x), pb(x));
      } catch (const EvaluationError& e) {
        fail(std::string("piece ") + std::to_string(i) + ": " + e.what());
        break;
      }
      report.max_piece_diff = std::max(report.max_piece_diff, gap);
      if (gap > tol) {
        fail("piece " + std::to_string(i) + " at x=" + fmt(x) + " mismatch " + fmt(gap));
      }
    }
  }
  return report;
}

}  // namespace pdist
