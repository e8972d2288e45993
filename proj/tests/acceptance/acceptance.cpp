// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "pdist/cli.hpp"
#include "pdist/dsl.hpp"
#include "pdist/errors.hpp"
#include "pdist/interface.hpp"
#include "pdist/ode.hpp"
#include "pdist/random_family.hpp"
#include "pdist/star.hpp"

using namespace pdist;

namespace {

const SmoothExpr X = SmoothExpr::x();
const PiecewiseDist H = PiecewiseDist::heaviside();
const PiecewiseDist Hm = PiecewiseDist::heaviside_minus();

PiecewiseDist delta(int k, double at = 0.0) { return PiecewiseDist::delta(k, at); }

// Collects failures of one criterion.
struct Check {
  int failures = 0;
  std::string first;

  void expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ == 0) first = what;
  }
  void near(double value, double tol, const std::string& what) {
    char buf[64];
    std::snprintf(buf, sizeof buf, " (got %.3g, tol %.1g)", value, tol);
    expect(value <= tol, what + buf);
  }
};

// Exact comparison of all delta coefficients against an expected list
// {point, order, coefficient}; regular part must vanish.
struct Expected {
  double point;
  int order;
  Complex coef;
};

double delta_error(const PiecewiseDist& f, const std::vector<Expected>& want) {
  double worst = 0.0;
  for (const auto& d : f.delta_terms()) {
    Complex target = 0.0;
    for (const auto& w : want) {
      if (w.point == f.breakpoints()[d.point_index] && w.order == d.order) target = w.coef;
    }
    worst = std::max(worst, std::abs(d.coefficient - target));
  }
  for (const auto& w : want) worst = std::max(worst, std::abs(f.delta_coefficient(w.point, w.order) - w.coef));
  for (const auto& p : f.pieces()) {
    if (!p.is_zero()) worst = std::max(worst, 1.0);
  }
  return worst;
}

PiecewiseDist times(const PiecewiseDist& f, const SmoothExpr& s) {
  std::vector<SmoothExpr> pieces;
  for (const auto& p : f.pieces()) pieces.push_back(p * s);
  return canonicalize(f.breakpoints(), pieces, {});
}

// Product for operands with disjoint singular supports, computed from the
// definition: pieces multiply, each delta derivative meets the other smooth
// factor through <s delta^(j), t> = (-1)^j (s t)^(j)(a).
PiecewiseDist dual_product(const PiecewiseDist& f, const PiecewiseDist& g) {
  const auto pts = union_points(f, g);
  const auto rf = refine(f, pts);
  const auto rg = refine(g, pts);
  std::vector<SmoothExpr> pieces;
  for (std::size_t i = 0; i < rf.pieces().size(); ++i) pieces.push_back(rf.pieces()[i] * rg.pieces()[i]);
  std::vector<std::vector<Complex>> deltas(pts.size());
  auto spread = [](const std::vector<Complex>& coefs, const SmoothExpr& s, double a, std::vector<Complex>& out) {
    for (std::size_t j = 0; j < coefs.size(); ++j) {
      if (coefs[j] == 0.0) continue;
      out.resize(std::max(out.size(), j + 1), 0.0);
      double binom = 1.0;
      for (std::size_t k = 0; k <= j; ++k) {
        if (k > 0) binom = binom * static_cast<double>(j - k + 1) / static_cast<double>(k);
        const double sign = ((j + k) % 2) ? -1.0 : 1.0;
        out[k] += coefs[j] * sign * binom * diff(s, static_cast<int>(j - k))(a);
      }
    }
  };
  for (std::size_t b = 0; b < pts.size(); ++b) {
    spread(rf.delta_table()[b], rg.pieces()[b], pts[b], deltas[b]);
    spread(rg.delta_table()[b], rf.pieces()[b], pts[b], deltas[b]);
  }
  return canonicalize(pts, pieces, deltas);
}

double gap(const PiecewiseDist& a, const PiecewiseDist& b) {
  const auto r = approx_equal(a, b, 0.0);
  return std::max(r.max_piece_diff, r.max_delta_diff);
}

// Lateral jet (psi(x0), ..., psi^(n-1)(x0)) from the adjacent piece.
Eigen::VectorXcd jet_of(const PiecewiseDist& psi, double x0, Side side, int n) {
  Eigen::VectorXcd t(n);
  const SmoothExpr& p = psi.piece_at(x0, side);
  for (int j = 0; j < n; ++j) t[j] = diff(p, j)(x0);
  return t;
}

// Polynomial with prescribed jet at 0 plus a random higher-order tail.
SmoothExpr with_jet(const Eigen::VectorXcd& t, RandomFamily& fam) {
  SmoothExpr s;
  double fact = 1.0;
  SmoothExpr power(1.0);
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    s = s + (t[j] / fact) * power;
    power = power * X;
  }
  return s + fam.uniform() * power * (1.0 + 0.3 * sin(X));
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = std::string(PDIST_BINARY_DIR) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

struct CliResult {
  int code;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, err.str()};
}

// ---------------------------------------------------------------------------

Check identities() {
  Check c;
  for (int k = 0; k <= 3; ++k) {
    c.near(delta_error(star(delta(k), H), {{0.0, k, 1.0}}), 1e-14, "delta^(k) * H");
    c.expect(star(H, delta(k)).is_zero(), "H * delta^(k) must vanish");
    for (int l = 0; l <= 3; ++l) c.expect(star(delta(k), delta(l)).is_zero(), "delta^(k) * delta^(l) must vanish");
  }
  c.near(delta_error(star(delta(0), PiecewiseDist(-0.5) + H), {{0.0, 0, 0.5}}), 1e-14, "delta * (H - 1/2)");
  return c;
}

Check algebra_laws() {
  Check c;
  RandomFamily fam(1001);
  for (int t = 0; t < 50; ++t) {
    const PiecewiseDist f = fam.dist();
    const PiecewiseDist g = fam.dist();
    const PiecewiseDist k = fam.dist();
    c.near(gap(star(star(f, g), k), star(f, star(g, k))), 1e-10, "associativity");
    c.near(gap(star(f, g + k), star(f, g) + star(f, k)), 1e-10, "left distributivity");
    c.near(gap(star(f + g, k), star(f, k) + star(g, k)), 1e-10, "right distributivity");

    // Smooth operands: pointwise product evaluated directly.
    const SmoothExpr s1 = fam.smooth();
    const SmoothExpr s2 = fam.smooth();
    const PiecewiseDist p = star(PiecewiseDist(s1), PiecewiseDist(s2));
    c.expect(!p.has_deltas(), "smooth product has no deltas");
    double worst = 0.0;
    for (int i = 0; i <= 40; ++i) {
      const double x = -3.0 + 0.15 * i;
      const Complex want = s1(x) * s2(x);
      worst = std::max(worst, std::abs(p.piece_at(x, Side::plus)(x) - want) / std::max(1.0, std::abs(want)));
    }
    c.near(worst, 1e-10, "smooth product reproduction");

    // Disjoint singular supports.
    const PiecewiseDist u = fam.dist({-1.0, 0.5});
    const PiecewiseDist v = fam.dist({0.0, 1.0});
    c.near(gap(star(u, v), dual_product(u, v)), 1e-10, "Hormander reproduction u*v");
    c.near(gap(star(v, u), dual_product(u, v)), 1e-10, "Hormander reproduction v*u");
  }
  return c;
}

Check leibniz() {
  Check c;
  RandomFamily fam(1002);
  const PointSet I{-1.0, 0.0, 1.0};
  for (int t = 0; t < 50; ++t) {
    const PiecewiseDist f = fam.dist();
    const PiecewiseDist g = fam.dist();
    c.near(gap(derivative(star(f, g), 1), star(derivative(f, 1), g) + star(f, derivative(g, 1))), 1e-10,
           "Leibniz for D");
    c.near(gap(tilde_d(star(f, g), I, 1), star(tilde_d(f, I, 1), g) + star(f, tilde_d(g, I, 1))), 1e-10,
           "Leibniz for the modified derivative");
  }
  c.expect(tilde_d(H, PointSet{0.0}, 1).is_zero(), "modified derivative of H must be exactly zero");
  c.expect(tilde_d(Hm, PointSet{0.0}, 1).is_zero(), "modified derivative of H- must be exactly zero");
  return c;
}

Check binomial() {
  Check c;
  RandomFamily fam(1003);
  for (int t = 0; t < 50; ++t) {
    const PiecewiseDist f = fam.dist({0.0});
    for (int n = 1; n <= 5; ++n) {
      c.near(gap(tilde_d_binomial(f, n), tilde_d(f, PointSet{0.0}, n)), 1e-10, "binomial expansion");
    }
  }
  return c;
}

Check interface_forms() {
  Check c;
  RandomFamily fam(1004);
  for (int t = 0; t < 50; ++t) {
    const int n = fam.integer(1, 4);
    const int m = fam.integer(1, n);
    const double x0 = fam.integer(-1, 1);
    const auto spec = InterfaceSpec::make(x0, fam.matrix(m, n), fam.matrix(m, n));
    const PiecewiseDist psi = fam.dist();
    const Eigen::VectorXcd want = spec.A * jet_of(psi, x0, Side::minus, n) - spec.B * jet_of(psi, x0, Side::plus, n);
    const auto shift = f_hat_shift(spec, psi);
    const auto trace = f_hat_trace(spec, psi);
    for (const PiecewiseDist* f : {&shift, &trace}) {
      c.expect(std::all_of(f->pieces().begin(), f->pieces().end(), [](const SmoothExpr& p) { return p.is_zero(); }),
               "interface operator output has a regular part");
      for (double p : f->breakpoints()) c.expect(p == x0, "interface operator output leaves {x0}");
      c.expect(f->max_delta_order() < m, "interface operator output has a delta of order >= m");
      double worst = 0.0;
      for (int i = 0; i < m; ++i) worst = std::max(worst, std::abs(f->delta_coefficient(x0, i) - want[i]));
      c.near(worst, 1e-12, "delta coefficients against the jet defect");
    }
    double worst = 0.0;
    for (int i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(shift.delta_coefficient(x0, i) - trace.delta_coefficient(x0, i)));
    }
    c.near(worst, 1e-12, "shift and trace forms");
  }
  return c;
}

OdeSpec random_ode(RandomFamily& fam, int n) {
  std::vector<SmoothExpr> coeffs;
  for (int i = 0; i < n; ++i) coeffs.push_back(fam.smooth());
  coeffs.push_back(2.0 + 0.5 * sin(X) + fam.uniform(0.0, 1.0));
  return OdeSpec::make(coeffs, fam.smooth(), {-5.0, 5.0});
}

Check ode2_forms() {
  Check c;
  RandomFamily fam(1005);
  for (int t = 0; t < 30; ++t) {
    const int n = fam.integer(1, 4);
    const OdeSpec ode = random_ode(fam, n);
    std::vector<InterfaceSpec> ifs;
    for (double p : {-1.0, 0.0, 1.0}) {
      if (fam.integer(0, 1) == 0) continue;
      const int m = fam.integer(1, n);
      ifs.push_back(InterfaceSpec::make(p, fam.matrix(m, n), fam.matrix(m, n)));
    }
    std::vector<double> pts;
    for (const auto& s : ifs) pts.push_back(s.point);
    const auto coeffs = singular_coeffs(ode, PointSet(pts));
    for (int i = 0; i <= n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      c.near(gap(coeffs.a_tilde[k] + coeffs.b_tilde[k], PiecewiseDist(ode.coeffs[k])), 1e-12, "a~ + b~ = a");
    }
    for (int r = 0; r < 3; ++r) {
      c.near(form_equivalence(ode, ifs, fam.dist(), {-5.0, 5.0}), 1e-9, "tilde and star forms");
    }
  }

  // Helmholtz with one interface: a~0 = k^2/2 - delta', a~1 = -2 delta, a~2 = 1/2.
  const double k = 1.0;
  const auto ode = OdeSpec::make({k * k, 0.0, 1.0}, 0.0, {-5.0, 5.0});
  const auto sc = singular_coeffs(ode, PointSet{0.0});
  auto structure = [&](const PiecewiseDist& f, Complex regular, std::vector<Complex> deltas) {
    const bool bp = deltas.empty() ? f.breakpoints().empty() : f.breakpoints() == std::vector<double>{0.0};
    bool pieces = true;
    for (const auto& p : f.pieces()) pieces = pieces && p.is_constant() && p.constant_value() == regular;
    while (!deltas.empty() && deltas.back() == 0.0) deltas.pop_back();
    auto table = f.delta_table().empty() ? std::vector<Complex>{} : f.delta_table()[0];
    while (!table.empty() && table.back() == 0.0) table.pop_back();
    return bp && pieces && table == deltas;
  };
  c.expect(structure(sc.a_tilde[0], 0.5 * k * k, {0.0, -1.0}), "a~0 = k^2/2 - delta'");
  c.expect(structure(sc.a_tilde[1], 0.0, {-2.0}), "a~1 = -2 delta");
  c.expect(structure(sc.a_tilde[2], 0.5, {}), "a~2 = 1/2");
  return c;
}

InterfaceSpec diag_spec(Complex k1, Complex k2) {
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2);
  A(0, 0) = k1;
  A(1, 1) = k2;
  return InterfaceSpec::make(0.0, A, Eigen::MatrixXcd::Identity(2, 2));
}

Check end_to_end() {
  Check c;
  const auto ode = OdeSpec::make({1.0, 0.0, 1.0}, 0.0, {-5.0, 5.0});
  InitialData init{-1.0, Eigen::VectorXcd(2)};
  init.jet << std::cos(-1.0), -std::sin(-1.0);
  const Window window{-5.0, 5.0};

  const auto spec = diag_spec(2.0, 3.0);
  const auto rep = solve(ode, {spec}, init, window);
  c.expect(rep.consistent && rep.solutions.size() == 1, "unique solution expected");
  if (rep.solutions.empty()) return c;
  const auto& psi = rep.solutions[0];
  double worst = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -5.0 + 10.0 * i / 2000.0;
    if (x == 0.0) continue;
    const double want = x < 0 ? std::cos(x) : 2.0 * std::cos(x);
    worst = std::max(worst, std::abs(psi.piece_at(x, Side::plus)(x) - want));
  }
  worst = std::max(worst, std::abs(psi.piece_at(0.0, Side::minus)(0.0) - 1.0));
  worst = std::max(worst, std::abs(psi.piece_at(0.0, Side::plus)(0.0) - 2.0));
  c.near(worst, 1e-8, "pointwise error against cos x / 2 cos x");
  for (Form form : {Form::tilde, Form::star}) {
    c.expect(verify(build_ode2(ode, {spec}, form), psi, 1e-7, window).pass, "verify at 1e-7");
  }

  const auto confined = solve(ode, {diag_spec(0.0, 0.0)}, init, window);
  c.expect(!confined.solutions.empty() && confined.solutions[0].piece_at(1.0, Side::plus).is_zero(),
           "confining case: plus piece must vanish identically");

  const auto zero = InterfaceSpec::make(0.0, Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2));
  const auto free = solve(ode, {zero}, init, window);
  c.expect(free.dimension == 4, "A = B = 0 must give dimension 4, got " + std::to_string(free.dimension));
  return c;
}

Check interface_operator() {
  Check c;
  RandomFamily fam(1008);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const int m = fam.integer(1, n);
    Eigen::MatrixXcd A = fam.matrix(m, n);
    const Eigen::MatrixXcd B = fam.matrix(m, n);
    Eigen::VectorXcd tm(n), tp(n);
    for (int j = 0; j < n; ++j) {
      tm[j] = fam.complex_unit();
      tp[j] = fam.complex_unit();
    }
    // Even cases: rank-one update of A so that A tm = B tp holds.
    const bool member = t % 2 == 0;
    if (member) A += (B * tp - A * tm) * tm.adjoint() / tm.squaredNorm();
    const auto spec = InterfaceSpec::make(0.0, A, B);
    const PiecewiseDist psi = canonicalize({0.0}, {with_jet(tm, fam), with_jet(tp, fam)}, {});
    const bool truth = (A * tm - B * tp).cwiseAbs().maxCoeff() <= 1e-10;
    const bool k = in_kernel(spec, psi, 1e-10);
    const bool d = l_f_domain_check(n, spec, psi, 1e-10);
    if (k == d && k == truth) ++agree;
  }
  c.expect(agree == 100, "domain check, kernel test and constructed membership agree on " +
                             std::to_string(agree) + "/100");

  // A = B = 0: only i^n times the piecewise n-th derivative remains.
  for (int t = 0; t < 40; ++t) {
    const int n = 1 + t % 4;
    const auto spec = InterfaceSpec::make(0.0, Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n));
    const SmoothExpr fm = fam.smooth();
    const SmoothExpr fp = fam.smooth();
    const PiecewiseDist psi = canonicalize({0.0}, {fm, fp}, {});
    const PiecewiseDist out = l_f_apply(n, spec, psi);
    Complex in = 1.0;
    for (int k = 0; k < n; ++k) in *= Complex(0.0, 1.0);
    double worst = 0.0;
    for (const auto& dterm : out.delta_terms()) worst = std::max(worst, std::abs(dterm.coefficient));
    const SmoothExpr dm = diff(fm, n);
    const SmoothExpr dp = diff(fp, n);
    for (int i = 0; i <= 60; ++i) {
      const double x = -3.0 + 0.1 * i;
      if (x == 0.0) continue;
      const Complex want = in * (x < 0 ? dm(x) : dp(x));
      worst = std::max(worst, std::abs(out.piece_at(x, Side::plus)(x) - want));
    }
    c.near(worst, 1e-9, "A = B = 0 residual against per-piece derivatives");
  }
  return c;
}

Check mollifier() {
  Check c;
  const TestFn g = TestFn::bump(0.0, 2.0);
  const std::vector<std::pair<std::string, PiecewiseDist>> family{
      {"H", H}, {"H*x", times(H, X)}, {"1", PiecewiseDist(1.0)}};
  for (const auto& [name, f] : family) {
    for (int n : {0, 1}) {
      for (Side side : {Side::minus, Side::plus}) {
        const Complex limit = pair(delta_shift(side, n, 0.0, f), g);
        double prev = 1e300;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
          const double err = std::abs(pair(mollifier_apply(side, n, eps, f), g) - limit);
          const std::string label = "F=" + name + " n=" + std::to_string(n) +
                                    (side == Side::plus ? " side=+" : " side=-");
          c.expect(err <= prev, label + ": discrepancy increased");
          prev = err;
          if (eps == 1e-3) c.near(err, 1e-3 * (1 - 1e-15), label + ": discrepancy at eps=1e-3");
        }
      }
    }
  }
  return c;
}

Check parser() {
  Check c;
  RandomFamily fam(1010);
  for (int t = 0; t < 100; ++t) {
    const PiecewiseDist f = fam.dist();
    const std::string text = print_dist(f);
    try {
      const auto r = approx_equal(parse_dist(text), f, 1e-12);
      c.expect(r.equal, "round trip of " + text + ": " + r.detail);
    } catch (const std::exception& e) {
      c.expect(false, "round trip of " + text + " threw " + e.what());
    }
  }

  const std::string m_gt_n = write_temp("acceptance_m_gt_n.json", R"({
    "ode": {"order": 2, "coeffs": ["1", "0", "1"]},
    "interfaces": [{"point": 0, "A": [[1,0],[0,1],[1,1]], "B": [[1,0],[0,1],[1,1]]}],
    "window": [-5, 5]})");
  const std::string a_n = write_temp("acceptance_vanishing.json", R"({
    "ode": {"order": 2, "coeffs": ["1", "0", "x"]}, "window": [-5, 5]})");

  const auto r1 = run_cli({"solve", "--problem", m_gt_n});
  c.expect(r1.code == 2 && r1.err.find("m ≤ n violated") != std::string::npos, "m > n: " + r1.err);
  const auto r2 = run_cli({"solve", "--problem", a_n});
  c.expect(r2.code == 2 && r2.err.find("a_n vanishes near x=0") != std::string::npos, "vanishing a_n: " + r2.err);
  const auto r3 = run_cli({"star", "H(x", "delta(x)"});
  c.expect(r3.code == 2 && r3.err.find("syntax error at line 1, column 4") != std::string::npos,
           "syntax error: " + r3.err);
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Check()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "star identities with exact delta coefficients", identities},
      {2, "associativity, distributivity, smooth and disjoint-support products", algebra_laws},
      {3, "Leibniz rule for D and the modified derivative; D~H = D~H- = 0", leibniz},
      {4, "binomial expansion of the modified derivative, n <= 5", binomial},
      {5, "interface operator: shift and trace forms, support at x0", interface_forms},
      {6, "tilde and star forms of the distributional ODE; singular coefficients", ode2_forms},
      {7, "Helmholtz interface problem end to end", end_to_end},
      {8, "i^n D~^n + F: domain check and A = B = 0 residual", interface_operator},
      {9, "mollified shifting deltas converge in pairing", mollifier},
      {10, "DSL round trip and input error exit codes", parser},
  };
  int failed = 0;
  for (const auto& crit : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = crit.run();
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.failures == 0) {
      std::printf("[PASS] %d %s (%.1fs)\n", crit.id, crit.name, secs);
    } else {
      ++failed;
      std::printf("[FAIL] %d %s (%.1fs): %d failure(s), first: %s\n", crit.id, crit.name, secs, c.failures,
                  c.first.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
