#pragma once

// Closed symbolic algebra of smooth complex-valued functions of one real
// variable. Expressions are immutable DAGs; every operation returns a new
// value and nodes are shared freely between expressions and threads.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pdist {

using Complex = std::complex<double>;

/// A smooth function that is only available numerically (for instance a
/// dense-output ODE trajectory). It enters the algebra as an opaque leaf.
class JetSource {
 public:
  virtual ~JetSource() = default;

  /// Returns f(x), f'(x), ..., f^(order)(x).
  virtual std::vector<Complex> derivatives(double x, int order) const = 0;

  virtual std::string name() const = 0;
};

namespace detail {
struct Node;
}

class SmoothExpr {
 public:
  /// The zero function.
  SmoothExpr();
  SmoothExpr(Complex c);  // NOLINT(google-explicit-constructor)
  SmoothExpr(double c);   // NOLINT(google-explicit-constructor)
  SmoothExpr(int c);      // NOLINT(google-explicit-constructor)
  explicit SmoothExpr(std::shared_ptr<const detail::Node> node);

  /// The independent variable x.
  static SmoothExpr x();

  /// Leaf backed by a numeric source; `derivative` selects f^(derivative).
  static SmoothExpr source(std::shared_ptr<const JetSource> src, int derivative = 0);

  /// Pointwise value. Throws EvaluationError at a pole.
  Complex operator()(double x) const;

  bool is_zero() const;
  bool is_constant() const;
  /// Value of a constant expression; only meaningful when is_constant().
  Complex constant_value() const;
  /// True if a numeric source leaf occurs anywhere in the tree.
  bool has_source() const;

  std::size_t hash() const;
  /// Text form in the expression syntax accepted by parse_smooth.
  std::string str() const;

  const detail::Node& node() const { return *node_; }
  const detail::Node* id() const { return node_.get(); }

 private:
  std::shared_ptr<const detail::Node> node_;
};

SmoothExpr operator+(const SmoothExpr& a, const SmoothExpr& b);
SmoothExpr operator-(const SmoothExpr& a, const SmoothExpr& b);
SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b);
/// Throws ConstructionError when `b` is structurally zero.
SmoothExpr operator/(const SmoothExpr& a, const SmoothExpr& b);
SmoothExpr operator-(const SmoothExpr& a);
SmoothExpr operator*(Complex c, const SmoothExpr& e);
SmoothExpr operator*(double c, const SmoothExpr& e);
SmoothExpr operator*(const SmoothExpr& e, Complex c);
SmoothExpr operator*(const SmoothExpr& e, double c);

SmoothExpr pow(const SmoothExpr& base, int exponent);
SmoothExpr exp(const SmoothExpr& arg);
SmoothExpr sin(const SmoothExpr& arg);
SmoothExpr cos(const SmoothExpr& arg);

/// outer(inner(x)).
SmoothExpr compose(const SmoothExpr& outer, const SmoothExpr& inner);

enum class CombineOp { add, sub, mul, div, compose, pow };

SmoothExpr combine(CombineOp op, const SmoothExpr& lhs, const SmoothExpr& rhs);
SmoothExpr combine(CombineOp op, const SmoothExpr& lhs, int exponent);

/// k-th symbolic derivative.
SmoothExpr diff(const SmoothExpr& e, int k = 1);

/// (e(x0), e'(x0), ..., e^(k)(x0)), computed by truncated Taylor arithmetic.
Eigen::VectorXcd eval_jet(const SmoothExpr& e, double x0, int k);

/// Taylor coefficients e^(j)(x0) / j! for j = 0..k.
std::vector<Complex> taylor_coefficients(const SmoothExpr& e, double x0, int k);

bool structurally_equal(const SmoothExpr& a, const SmoothExpr& b);

std::ostream& operator<<(std::ostream& os, const SmoothExpr& e);

/// Formats a complex number in the expression syntax (17 significant digits).
std::string format_complex(Complex c);
std::string format_real(double v);

}  // namespace pdist
