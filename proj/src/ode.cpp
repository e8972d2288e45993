#include "pdist/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "pdist/errors.hpp"
#include "pdist/rk45.hpp"

namespace pdist {
namespace {

using Traj = DenseTrajectory<Complex>;

std::string short_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

// psi^(n+k) from sum_i a_i psi^(i) = f differentiated k times.
std::vector<Complex> extend_jet(const OdeSpec& ode, bool homogeneous, double x,
                                std::vector<Complex> d, int order) {
  const int n = ode.order;
  if (order < n) {
    d.resize(static_cast<std::size_t>(order) + 1);
    return d;
  }
  const int extra = order - n;
  std::vector<Eigen::VectorXcd> a;
  for (const auto& c : ode.coeffs) a.push_back(eval_jet(c, x, extra));
  const Eigen::VectorXcd f = homogeneous ? Eigen::VectorXcd::Zero(extra + 1) : eval_jet(ode.rhs, x, extra);
  for (int k = 0; k <= extra; ++k) {
    Complex acc = f[k];
    for (int i = 0; i <= n; ++i) {
      for (int l = 0; l <= k; ++l) {
        if (i == n && l == 0) continue;
        acc -= binomial(k, l) * a[static_cast<std::size_t>(i)][l] * d[static_cast<std::size_t>(i + k - l)];
      }
    }
    d.push_back(acc / a[static_cast<std::size_t>(n)][0]);
  }
  return d;
}

// Numeric solution on [lo, hi] started at ref; higher derivatives come from
// the equation itself.
class OdeTrajectory final : public JetSource {
 public:
  OdeTrajectory(OdeSpec ode, bool homogeneous, Traj left, Traj right, double ref, std::string name)
      : ode_(std::move(ode)),
        homogeneous_(homogeneous),
        left_(std::move(left)),
        right_(std::move(right)),
        ref_(ref),
        name_(std::move(name)) {}

  std::vector<Complex> derivatives(double x, int order) const override {
    const Traj& t = x < ref_ ? left_ : right_;
    const Eigen::VectorXcd y = t(x);
    return extend_jet(ode_, homogeneous_, x, std::vector<Complex>(y.data(), y.data() + y.size()), order);
  }

  std::string name() const override { return name_; }

  Eigen::VectorXcd state(double x) const { return (x < ref_ ? left_ : right_)(x); }

 private:
  OdeSpec ode_;
  bool homogeneous_;
  Traj left_;
  Traj right_;
  double ref_;
  std::string name_;
};

// Fundamental system on one interval: psi = u + sum_j c_j phi_j where u has
// zero jet at ref and phi_j has the j-th unit jet there.
struct IntervalBasis {
  double lo = 0.0;
  double hi = 0.0;
  double ref = 0.0;
  // Exact path: basis functions b and unit-jet transform W, plus constant u0.
  std::vector<SmoothExpr> basis;
  Eigen::MatrixXcd W;
  Complex u0 = 0.0;
  // Numeric path.
  std::shared_ptr<OdeTrajectory> particular;
  std::vector<std::shared_ptr<OdeTrajectory>> homogeneous;

  bool exact() const { return !basis.empty(); }

  // jet(x) = ju + Phi c.
  void jets(double x, int n, Eigen::VectorXcd& ju, Eigen::MatrixXcd& phi) const {
    if (exact()) {
      Eigen::MatrixXcd J(n, n);
      for (int col = 0; col < n; ++col) J.col(col) = eval_jet(basis[static_cast<std::size_t>(col)], x, n - 1);
      phi = J * W;
      Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(n);
      e0[0] = u0;
      ju = e0 - phi * e0;
      return;
    }
    ju = particular ? particular->state(x) : Eigen::VectorXcd::Zero(n);
    phi.resize(n, n);
    for (int j = 0; j < n; ++j) phi.col(j) = homogeneous[static_cast<std::size_t>(j)]->state(x);
  }

  SmoothExpr piece(const Eigen::VectorXcd& c) const {
    const auto n = static_cast<int>(c.size());
    SmoothExpr out;
    if (exact()) {
      Eigen::VectorXcd shifted = c;
      shifted[0] -= u0;
      const Eigen::VectorXcd gamma = W * shifted;
      if (u0 != 0.0) out = SmoothExpr(u0);
      for (int col = 0; col < n; ++col) {
        if (gamma[col] != 0.0) out = out + gamma[col] * basis[static_cast<std::size_t>(col)];
      }
      return out;
    }
    if (particular) out = SmoothExpr::source(particular);
    for (int j = 0; j < n; ++j) {
      if (c[j] != 0.0) out = out + c[j] * SmoothExpr::source(homogeneous[static_cast<std::size_t>(j)]);
    }
    return out;
  }
};

IntervalBasis exact_basis(const OdeSpec& ode, double lo, double hi, double ref) {
  const int n = ode.order;
  const Complex an = ode.coeffs.back().constant_value();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -ode.coeffs[static_cast<std::size_t>(i)].constant_value() / an;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(companion);
  if (eig.info() != Eigen::Success) throw NumericalError("characteristic roots did not converge");

  // Roots closer than 1e-6 are treated as one repeated root.
  std::vector<std::pair<Complex, int>> clusters;
  std::vector<std::vector<Complex>> members;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const Complex r = eig.eigenvalues()[i];
    bool placed = false;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      if (std::abs(clusters[c].first - r) < 1e-6) {
        members[c].push_back(r);
        Complex mean = 0.0;
        for (Complex v : members[c]) mean += v;
        clusters[c] = {mean / static_cast<double>(members[c].size()), clusters[c].second + 1};
        placed = true;
        break;
      }
    }
    if (!placed) {
      clusters.push_back({r, 1});
      members.push_back({r});
    }
  }

  IntervalBasis b;
  b.lo = lo;
  b.hi = hi;
  b.ref = ref;
  const SmoothExpr t = SmoothExpr::x() - ref;
  for (const auto& [root, mult] : clusters) {
    // Snap roundoff-level components so that e.g. +-i stay purely imaginary.
    Complex r = root;
    if (std::abs(r.real()) < 1e-14 * std::max(1.0, std::abs(r))) r.real(0.0);
    if (std::abs(r.imag()) < 1e-14 * std::max(1.0, std::abs(r))) r.imag(0.0);
    const SmoothExpr e = r == 0.0 ? SmoothExpr(1.0) : exp(r * t);
    for (int s = 0; s < mult; ++s) b.basis.push_back(s == 0 ? e : pow(t, s) * e);
  }
  Eigen::MatrixXcd J(n, n);
  for (int col = 0; col < n; ++col) J.col(col) = eval_jet(b.basis[static_cast<std::size_t>(col)], ref, n - 1);
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
  if (!lu.isInvertible()) throw NumericalError("characteristic basis is degenerate");
  b.W = lu.inverse();
  const Complex f = ode.rhs.constant_value();
  if (f != 0.0) b.u0 = f / ode.coeffs[0].constant_value();
  return b;
}

Traj integrate_state(const OdeSpec& ode, bool homogeneous, const Eigen::VectorXcd& y0, double from,
                     double to, double rtol) {
  const int n = ode.order;
  auto rhs = [&](double x, const Eigen::VectorXcd& y) {
    Eigen::VectorXcd dy(n);
    for (int i = 0; i + 1 < n; ++i) dy[i] = y[i + 1];
    Complex acc = homogeneous ? Complex(0.0) : ode.rhs(x);
    for (int i = 0; i < n; ++i) acc -= ode.coeffs[static_cast<std::size_t>(i)](x) * y[i];
    dy[n - 1] = acc / ode.coeffs.back()(x);
    return dy;
  };
  Rk45Options opts;
  opts.rtol = rtol;
  return Traj::integrate(rhs, from, y0, to, opts);
}

IntervalBasis numeric_basis(const OdeSpec& ode, double lo, double hi, double ref, double rtol, int index) {
  const int n = ode.order;
  IntervalBasis b;
  b.lo = lo;
  b.hi = hi;
  b.ref = ref;
  auto make = [&](bool homogeneous, const Eigen::VectorXcd& y0, const std::string& name) {
    return std::make_shared<OdeTrajectory>(ode, homogeneous, integrate_state(ode, homogeneous, y0, ref, lo, rtol),
                                           integrate_state(ode, homogeneous, y0, ref, hi, rtol), ref, name);
  };
  const std::string tag = "interval" + std::to_string(index);
  if (!ode.rhs.is_zero()) b.particular = make(false, Eigen::VectorXcd::Zero(n), tag + "_u");
  for (int j = 0; j < n; ++j) {
    b.homogeneous.push_back(make(true, Eigen::VectorXcd::Unit(n, j), tag + "_phi" + std::to_string(j)));
  }
  return b;
}

struct AffineSolve {
  bool consistent = true;
  Eigen::VectorXcd particular;
  Eigen::MatrixXcd null;
  int rank = 0;
};

AffineSolve solve_affine(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& r) {
  AffineSolve out;
  const auto cols = M.cols();
  if (M.rows() == 0 || M.cwiseAbs().maxCoeff() == 0.0) {
    out.consistent = r.size() == 0 || r.cwiseAbs().maxCoeff() <= 1e-12;
    out.particular = Eigen::VectorXcd::Zero(cols);
    out.null = Eigen::MatrixXcd::Identity(cols, cols);
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  out.rank = static_cast<int>(svd.rank());
  out.particular = svd.solve(r);
  const double scale = std::max({1.0, r.norm(), svd.singularValues()[0] * out.particular.norm()});
  out.consistent = (M * out.particular - r).norm() <= 1e-9 * scale;
  out.null = svd.matrixV().rightCols(cols - out.rank);
  return out;
}

}  // namespace

// ---------------------------------------------------------------- OdeSpec

OdeSpec OdeSpec::make(std::vector<SmoothExpr> coeffs, SmoothExpr rhs, const Window& window) {
  if (coeffs.size() < 2) throw ConstructionError("an ODE of order n needs n+1 >= 2 coefficients");
  OdeSpec spec;
  spec.order = static_cast<int>(coeffs.size()) - 1;
  spec.coeffs = std::move(coeffs);
  spec.rhs = std::move(rhs);
  spec.check_leading(window);
  return spec;
}

void OdeSpec::check_leading(const Window& window) const {
  if (coeffs.size() != static_cast<std::size_t>(order) + 1) {
    throw ConstructionError("expected " + std::to_string(order + 1) + " coefficients, got " +
                            std::to_string(coeffs.size()));
  }
  const SmoothExpr& an = coeffs.back();
  auto value = [&](double x) {
    try {
      return an(x);
    } catch (const EvaluationError&) {
      throw ConstructionError("a_n cannot be evaluated at x=" + short_real(x));
    }
  };
  auto vanish = [&](double x) {
    if (std::abs(x) < 1e-12 * std::max(1.0, std::abs(window.hi - window.lo))) x = 0.0;
    throw ConstructionError("a_n vanishes near x=" + short_real(x));
  };
  constexpr int kSamples = 257;
  std::vector<double> xs(kSamples);
  std::vector<Complex> vs(kSamples);
  for (int k = 0; k < kSamples; ++k) {
    xs[static_cast<std::size_t>(k)] = window.lo + (window.hi - window.lo) * k / (kSamples - 1);
    vs[static_cast<std::size_t>(k)] = value(xs[static_cast<std::size_t>(k)]);
    if (std::abs(vs[static_cast<std::size_t>(k)]) <= 1e-12) vanish(xs[static_cast<std::size_t>(k)]);
  }
  // A sign change of either component between samples may hide a zero; look
  // for the minimum of |a_n| there.
  for (int k = 0; k + 1 < kSamples; ++k) {
    const Complex a = vs[static_cast<std::size_t>(k)];
    const Complex b = vs[static_cast<std::size_t>(k + 1)];
    if (a.real() * b.real() >= 0.0 && a.imag() * b.imag() >= 0.0) continue;
    double l = xs[static_cast<std::size_t>(k)];
    double r = xs[static_cast<std::size_t>(k + 1)];
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double m1 = r - g * (r - l);
    double m2 = l + g * (r - l);
    double f1 = std::abs(value(m1));
    double f2 = std::abs(value(m2));
    for (int it = 0; it < 100 && r - l > 1e-15 * std::max(1.0, std::abs(l)); ++it) {
      if (f1 < f2) {
        r = m2;
        m2 = m1;
        f2 = f1;
        m1 = r - g * (r - l);
        f1 = std::abs(value(m1));
      } else {
        l = m1;
        m1 = m2;
        f1 = f2;
        m2 = l + g * (r - l);
        f2 = std::abs(value(m2));
      }
    }
    const double xm = 0.5 * (l + r);
    if (std::abs(value(xm)) <= 1e-12) vanish(xm);
  }
}

bool OdeSpec::constant_coefficients() const {
  return rhs.is_constant() &&
         std::all_of(coeffs.begin(), coeffs.end(), [](const SmoothExpr& c) { return c.is_constant(); });
}

std::string to_string(Form form) { return form == Form::tilde ? "tilde" : "star"; }

std::string to_string(CrossingStatus status) {
  switch (status) {
    case CrossingStatus::unique:
      return "unique";
    case CrossingStatus::family:
      return "family";
    case CrossingStatus::inconsistent:
      return "inconsistent";
    case CrossingStatus::unreached:
      return "unreached";
  }
  return "unknown";
}

// ---------------------------------------------------------------- ODE2

SingularCoeffs singular_coeffs(const OdeSpec& ode, const PointSet& points) {
  const int n = ode.order;
  SingularCoeffs out;
  for (int i = 0; i <= n; ++i) {
    const SmoothExpr half = 0.5 * ode.coeffs[static_cast<std::size_t>(i)];
    PiecewiseDist sum;
    for (int k = 1; k <= n - i; ++k) {
      const SmoothExpr& a = ode.coeffs[static_cast<std::size_t>(i + k)];
      for (double p : points) {
        std::vector<Complex> coefs = smooth_times_delta(a, k - 1, p);
        for (auto& c : coefs) c *= binomial(i + k, k);
        sum = sum + canonicalize({p}, {SmoothExpr(), SmoothExpr()}, {coefs});
      }
    }
    out.a_tilde.push_back(PiecewiseDist(half) - sum);
    out.b_tilde.push_back(PiecewiseDist(half) + sum);
  }
  return out;
}

Ode2Operator build_ode2(const OdeSpec& ode, std::vector<InterfaceSpec> interfaces, Form form) {
  std::vector<double> pts;
  for (const auto& s : interfaces) {
    s.validate();
    if (s.order() != ode.order) {
      throw ConstructionError("interface at x=" + format_real(s.point) + " constrains " +
                              std::to_string(s.order()) + " derivatives but the ODE has order " +
                              std::to_string(ode.order));
    }
    pts.push_back(s.point);
  }
  Ode2Operator op;
  op.form = form;
  op.ode = ode;
  op.points = PointSet(pts);
  std::sort(interfaces.begin(), interfaces.end(),
            [](const InterfaceSpec& a, const InterfaceSpec& b) { return a.point < b.point; });
  op.interfaces = std::move(interfaces);
  if (form == Form::star) op.coeffs = singular_coeffs(ode, op.points);
  return op;
}

PiecewiseDist apply_ode2(const Ode2Operator& op, const PiecewiseDist& psi) {
  const int n = op.ode.order;
  PiecewiseDist out = -PiecewiseDist(op.ode.rhs);
  if (op.form == Form::tilde) {
    PiecewiseDist d = psi;
    for (int i = 0; i <= n; ++i) {
      if (i > 0) d = tilde_d(d, op.points, 1);
      out = out + star(PiecewiseDist(op.ode.coeffs[static_cast<std::size_t>(i)]), d);
    }
    for (const auto& s : op.interfaces) out = out + f_hat_shift(s, psi);
  } else {
    PiecewiseDist d = psi;
    for (int i = 0; i <= n; ++i) {
      if (i > 0) d = derivative(d, 1);
      out = out + star(op.coeffs.a_tilde[static_cast<std::size_t>(i)], d) +
            star(d, op.coeffs.b_tilde[static_cast<std::size_t>(i)]);
    }
    for (const auto& s : op.interfaces) out = out + f_hat_trace(s, psi);
  }
  return out;
}

VerifyReport verify(const Ode2Operator& op, const PiecewiseDist& psi, double tol, const Window& window) {
  VerifyReport report;
  PiecewiseDist residual;
  try {
    residual = apply_ode2(op, psi);
  } catch (const std::exception& e) {
    report.detail = std::string("residual could not be formed: ") + e.what();
    report.piece_max = report.delta_max = std::numeric_limits<double>::infinity();
    return report;
  }
  for (const auto& d : residual.delta_terms()) {
    const double v = std::abs(d.coefficient);
    if (v > report.delta_max) {
      report.delta_max = v;
      if (v > tol) {
        report.detail = "delta^(" + std::to_string(d.order) + ") at x=" +
                        format_real(residual.breakpoints()[d.point_index]) + " has coefficient " +
                        format_complex(d.coefficient);
      }
    }
  }
  std::vector<double> cuts{window.lo};
  for (double p : residual.breakpoints()) {
    if (p > window.lo && p < window.hi) cuts.push_back(p);
  }
  cuts.push_back(window.hi);
  constexpr int kSamples = 65;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    const SmoothExpr& piece = residual.piece_at(0.5 * (lo + hi), Side::plus);
    if (piece.is_zero()) continue;
    for (int k = 0; k < kSamples; ++k) {
      const double x = lo + (hi - lo) * (k + 0.5) / kSamples;
      double v;
      try {
        v = std::abs(piece(x));
      } catch (const EvaluationError& e) {
        report.piece_max = std::numeric_limits<double>::infinity();
        report.detail = e.what();
        break;
      }
      if (v > report.piece_max) {
        report.piece_max = v;
        if (v > tol && report.delta_max <= tol) {
          report.detail = "piece residual " + format_real(v) + " at x=" + format_real(x);
        }
      }
    }
  }
  report.pass = report.piece_max <= tol && report.delta_max <= tol;
  if (report.pass) report.detail.clear();
  return report;
}

double form_equivalence(const OdeSpec& ode, const std::vector<InterfaceSpec>& interfaces,
                        const PiecewiseDist& psi, const Window& window) {
  const auto tilde = apply_ode2(build_ode2(ode, interfaces, Form::tilde), psi);
  const auto starred = apply_ode2(build_ode2(ode, interfaces, Form::star), psi);
  const double w = std::max(std::abs(window.lo), std::abs(window.hi));
  const ApproxReport r = approx_equal(tilde, starred, 0.0, w);
  return std::max(r.max_piece_diff, r.max_delta_diff);
}

// ---------------------------------------------------------------- solve

SolutionReport solve(const OdeSpec& ode, const std::vector<InterfaceSpec>& interfaces, const InitialData& init,
                     const Window& window, const SolveOptions& opts) {
  const int n = ode.order;
  if (!(window.lo < window.hi)) throw InputError("window must satisfy lo < hi");
  if (init.jet.size() != n) {
    throw InputError("initial jet has " + std::to_string(init.jet.size()) + " entries, expected " +
                     std::to_string(n));
  }
  if (init.x < window.lo || init.x > window.hi) {
    throw InputError("initial point x=" + format_real(init.x) + " lies outside the window");
  }
  const Ode2Operator op = build_ode2(ode, interfaces, Form::tilde);
  const auto& specs = op.interfaces;
  std::vector<double> pts;
  for (const auto& s : specs) {
    if (!(s.point > window.lo && s.point < window.hi)) {
      throw InputError("interface point x=" + format_real(s.point) + " lies outside the window");
    }
    if (s.point == init.x) throw InputError("initial point coincides with an interface point");
    pts.push_back(s.point);
  }
  const std::size_t m = pts.size();
  std::vector<double> bounds{window.lo};
  bounds.insert(bounds.end(), pts.begin(), pts.end());
  bounds.push_back(window.hi);
  const auto k0 = static_cast<std::size_t>(std::upper_bound(pts.begin(), pts.end(), init.x) - pts.begin());

  const bool exact = opts.allow_exact && ode.constant_coefficients() &&
                     (ode.rhs.is_zero() || ode.coeffs[0].constant_value() != 0.0);
  std::vector<IntervalBasis> basis;
  for (std::size_t k = 0; k <= m; ++k) {
    const double ref = k == k0 ? init.x : (k > k0 ? bounds[k] : bounds[k + 1]);
    basis.push_back(exact ? exact_basis(ode, bounds[k], bounds[k + 1], ref)
                          : numeric_basis(ode, bounds[k], bounds[k + 1], ref, opts.rtol, static_cast<int>(k)));
  }

  // Jets on each interval are cbar_k + N_k s for a shared parameter s.
  std::vector<Eigen::VectorXcd> cbar(m + 1);
  std::vector<Eigen::MatrixXcd> N(m + 1);
  std::vector<bool> known(m + 1, false);
  cbar[k0] = init.jet;
  N[k0] = Eigen::MatrixXcd::Zero(n, 0);
  known[k0] = true;

  SolutionReport report;
  report.exact = exact;
  for (std::size_t i = 0; i < m; ++i) report.interfaces.push_back({pts[i], CrossingStatus::unreached, 0});

  auto cross = [&](std::size_t from, std::size_t to, std::size_t iface) {
    const InterfaceSpec& s = specs[iface];
    const bool rightward = to > from;
    Eigen::VectorXcd ju;
    Eigen::MatrixXcd phi;
    basis[from].jets(s.point, n, ju, phi);
    // Known side: ju + phi (cbar + N s). Unknown side: its reference jet.
    const Eigen::MatrixXcd& known_side = rightward ? s.A : s.B;
    const Eigen::MatrixXcd& new_side = rightward ? s.B : s.A;
    const auto d = N[from].cols();
    Eigen::MatrixXcd M(s.rows(), n + d);
    M << new_side, -known_side * phi * N[from];
    const Eigen::VectorXcd r = known_side * (ju + phi * cbar[from]);
    const AffineSolve sol = solve_affine(M, r);
    InterfaceRecord& rec = report.interfaces[iface];
    if (!sol.consistent) {
      rec.status = CrossingStatus::inconsistent;
      return false;
    }
    rec.fiber_dim = n - sol.rank;
    rec.status = rec.fiber_dim == 0 ? CrossingStatus::unique : CrossingStatus::family;
    const Eigen::VectorXcd zs = sol.particular.tail(d);
    const Eigen::MatrixXcd Zs = sol.null.bottomRows(d);
    for (std::size_t k = 0; k <= m; ++k) {
      if (!known[k]) continue;
      cbar[k] += N[k] * zs;
      N[k] = N[k] * Zs;
    }
    cbar[to] = sol.particular.head(n);
    N[to] = sol.null.topRows(n);
    known[to] = true;
    return true;
  };

  bool ok = true;
  for (std::size_t k = k0; ok && k < m; ++k) ok = cross(k, k + 1, k);
  for (std::size_t k = k0; ok && k > 0; --k) ok = cross(k, k - 1, k - 1);
  report.consistent = ok;
  if (!ok) {
    report.dimension = -1;
    return report;
  }
  report.dimension = n;
  for (const auto& rec : report.interfaces) report.dimension += rec.fiber_dim;

  const auto free_dims = N[k0].cols();
  for (Eigen::Index dir = -1; dir < free_dims; ++dir) {
    std::vector<SmoothExpr> pieces;
    for (std::size_t k = 0; k <= m; ++k) {
      Eigen::VectorXcd c = cbar[k];
      if (dir >= 0) c += N[k].col(dir);
      pieces.push_back(basis[k].piece(c));
    }
    report.solutions.push_back(canonicalize(pts, std::move(pieces), {}));
  }
  for (const auto& psi : report.solutions) {
    const VerifyReport v = verify(op, psi, 0.0, window);
    report.piece_residual = std::max(report.piece_residual, v.piece_max);
    report.delta_residual = std::max(report.delta_residual, v.delta_max);
  }
  return report;
}

}  // namespace pdist
