#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "pdist/errors.hpp"
#include "pdist/smooth_expr.hpp"

using namespace pdist;

namespace {

const SmoothExpr X = SmoothExpr::x();

bool close(Complex a, Complex b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Random tree of bounded depth; division only by expressions kept away from zero.
SmoothExpr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng)) {
    case 0:
      return SmoothExpr(coef(rng));
    case 1:
      return X;
    case 2:
      return random_tree(rng, depth - 1) + random_tree(rng, depth - 1);
    case 3:
      return random_tree(rng, depth - 1) * random_tree(rng, depth - 1);
    case 4:
      return random_tree(rng, depth - 1) / (3.0 + sin(random_tree(rng, depth - 1)));
    case 5:
      return sin(random_tree(rng, depth - 1));
    case 6:
      return cos(random_tree(rng, depth - 1));
    case 7:
      return exp(sin(random_tree(rng, depth - 1)));
    default:
      return pow(random_tree(rng, depth - 1), 2) - random_tree(rng, depth - 1);
  }
}

}  // namespace

TEST_CASE("combine examples") {
  CHECK(std::abs(combine(CombineOp::mul, sin(X), cos(X))(0.0)) == 0.0);
  CHECK(combine(CombineOp::add, X, -X).is_zero());
  const SmoothExpr inner = SmoothExpr(-1.0) / (1.0 - X * X);
  const SmoothExpr composed = combine(CombineOp::compose, exp(X), inner);
  CHECK(close(composed(0.0), std::exp(-1.0), 1e-15));
  CHECK_THROWS_AS(combine(CombineOp::div, X, SmoothExpr()), ConstructionError);
  CHECK(close(combine(CombineOp::pow, X + 1.0, 3)(1.0), 8.0, 1e-15));
}

TEST_CASE("diff examples") {
  CHECK(structurally_equal(diff(sin(X), 1), cos(X)));
  CHECK(close(diff(pow(X, 3), 2)(2.0), 12.0, 1e-15));
  CHECK(std::abs(diff(exp(SmoothExpr(-1.0) / (1.0 - X * X)), 1)(0.0)) == 0.0);
  CHECK(structurally_equal(diff(X, 0), X));
}

TEST_CASE("eval_jet examples") {
  auto j = eval_jet(cos(X), 0.0, 1);
  CHECK(close(j[0], 1.0, 1e-15));
  CHECK(std::abs(j[1]) < 1e-15);
  j = eval_jet(exp(X), 0.0, 3);
  for (int k = 0; k < 4; ++k) CHECK(close(j[k], 1.0, 1e-15));
  const double pi = std::numbers::pi;
  j = eval_jet(X * sin(X), pi, 2);
  CHECK(std::abs(j[0]) < 1e-14);
  CHECK(close(j[1], -pi, 1e-14));
  CHECK(close(j[2], -2.0, 1e-14));
}

TEST_CASE("pole reported at evaluation") {
  const SmoothExpr e = SmoothExpr(1.0) / X;
  CHECK_THROWS_AS(e(0.0), EvaluationError);
  CHECK_THROWS_AS(eval_jet(e, 0.0, 2), EvaluationError);
  CHECK(close(e(2.0), 0.5, 1e-15));
}

TEST_CASE("complex constants and the imaginary unit") {
  const SmoothExpr e = SmoothExpr(Complex(0, 1)) * X + Complex(2, 3);
  CHECK(close(e(1.0), Complex(2, 4), 1e-15));
  CHECK(e.str().find('i') != std::string::npos);
}

TEST_CASE("linearity and Leibniz of diff at sample points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SmoothExpr a = random_tree(rng, 3);
    const SmoothExpr b = random_tree(rng, 3);
    const Complex alpha(0.7, -0.2);
    const Complex beta(-1.3, 0.5);
    for (int k = 1; k <= 2; ++k) {
      const SmoothExpr lhs = diff(SmoothExpr(alpha) * a + SmoothExpr(beta) * b, k);
      const SmoothExpr rhs = SmoothExpr(alpha) * diff(a, k) + SmoothExpr(beta) * diff(b, k);
      for (int s = 0; s < 64; ++s) {
        const double x = xs(rng);
        CHECK(close(lhs(x), rhs(x), 1e-12));
      }
    }
    const SmoothExpr prod = diff(a * b, 1);
    const SmoothExpr leib = diff(a, 1) * b + a * diff(b, 1);
    for (int s = 0; s < 64; ++s) {
      const double x = xs(rng);
      CHECK(close(prod(x), leib(x), 1e-12));
    }
  }
}

TEST_CASE("finite differences agree with symbolic derivative") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(-1.5, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const SmoothExpr e = random_tree(rng, 5);
    const double x0 = xs(rng);
    const double h = 1e-5;
    const Complex fd = (e(x0 + h) - e(x0 - h)) / (2 * h);
    const Complex exact = diff(e, 1)(x0);
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("jets match iterated symbolic derivatives") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const SmoothExpr e = random_tree(rng, 4);
    const auto jet = eval_jet(e, 0.3, 4);
    for (int k = 0; k <= 4; ++k) CHECK(close(jet[k], diff(e, k)(0.3), 1e-10));
  }
}

TEST_CASE("simplification preserves values") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> xs(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const SmoothExpr a = random_tree(rng, 3);
    const SmoothExpr b = random_tree(rng, 3);
    const SmoothExpr e = (a + b) * (a - b) - (a * a - b * b);
    for (int s = 0; s < 64; ++s) {
      const double x = xs(rng);
      const double scale = 1.0 + std::norm(a(x)) + std::norm(b(x));
      CHECK(std::abs(e(x)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("structural equality ignores operand order") {
  CHECK(structurally_equal(X * sin(X) + 2.0, 2.0 + sin(X) * X));
  CHECK(!structurally_equal(sin(X), cos(X)));
  CHECK((sin(X) + cos(X)).hash() == (cos(X) + sin(X)).hash());
}
