#include "pdist/smooth_expr.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <unordered_map>
#include <utility>

#include "pdist/errors.hpp"

namespace pdist {
namespace detail {

enum class Kind : std::uint8_t { constant, variable, sum, product, exp, sin, cos, source };

// Normal form:
//  - sum:     value + sum_k coef_k * term_k, terms are neither constants nor sums
//  - product: prod_k base_k ^ power_k, bases are neither constants, sums with a
//             single scaled term, nor products; no coefficient (scaled products
//             are sums with one term)
struct Node {
  Kind kind = Kind::constant;
  Complex value{};
  std::vector<std::pair<Complex, SmoothExpr>> terms;
  std::vector<std::pair<SmoothExpr, int>> factors;
  std::vector<SmoothExpr> args;  // one argument for exp/sin/cos
  std::shared_ptr<const JetSource> src;
  int offset = 0;
  bool has_source = false;
  std::size_t hash = 0;
};

}  // namespace detail

namespace {

using detail::Kind;
using detail::Node;

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_double(double v) {
  if (v == 0.0) v = 0.0;  // fold -0.0
  return mix(std::bit_cast<std::uint64_t>(v));
}

std::uint64_t hash_complex(Complex c) {
  return mix(hash_double(c.real()) ^ (hash_double(c.imag()) * 31));
}

std::shared_ptr<const Node> finish(Node&& n) {
  std::uint64_t h = mix(static_cast<std::uint64_t>(n.kind) + 1);
  switch (n.kind) {
    case Kind::constant:
      h ^= hash_complex(n.value);
      break;
    case Kind::variable:
      break;
    case Kind::sum: {
      std::uint64_t acc = hash_complex(n.value);
      for (const auto& [c, t] : n.terms) {
        acc += mix(hash_complex(c) ^ (t.hash() * 0x2545f4914f6cdd1dULL));
        n.has_source = n.has_source || t.has_source();
      }
      h ^= mix(acc);
      break;
    }
    case Kind::product: {
      std::uint64_t acc = 0;
      for (const auto& [b, p] : n.factors) {
        acc += mix(b.hash() ^ mix(static_cast<std::uint64_t>(p) + 7));
        n.has_source = n.has_source || b.has_source();
      }
      h ^= mix(acc);
      break;
    }
    case Kind::exp:
    case Kind::sin:
    case Kind::cos:
      h ^= mix(n.args[0].hash());
      n.has_source = n.args[0].has_source();
      break;
    case Kind::source:
      h ^= mix(reinterpret_cast<std::uintptr_t>(n.src.get())) ^ mix(n.offset + 99);
      n.has_source = true;
      break;
  }
  n.hash = mix(h);
  return std::make_shared<const Node>(std::move(n));
}

SmoothExpr make_constant(Complex c) {
  Node n;
  n.kind = Kind::constant;
  n.value = c;
  return SmoothExpr(finish(std::move(n)));
}

const SmoothExpr& zero_expr() {
  static const SmoothExpr z = make_constant(0.0);
  return z;
}

Complex ipow(Complex v, int p) {
  if (p < 0) return Complex(1.0) / ipow(v, -p);
  Complex r = 1.0;
  Complex b = v;
  while (p > 0) {
    if (p & 1) r *= b;
    b *= b;
    p >>= 1;
  }
  return r;
}

// ---------------------------------------------------------------- building

struct Linear {
  Complex constant;
  std::vector<std::pair<Complex, SmoothExpr>> terms;
};

Linear as_linear(const SmoothExpr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::constant) return {n.value, {}};
  if (n.kind == Kind::sum) return {n.value, n.terms};
  return {0.0, {{1.0, e}}};
}

void add_term(std::vector<std::pair<Complex, SmoothExpr>>& terms, Complex c, const SmoothExpr& t) {
  for (auto& [coef, term] : terms) {
    if (structurally_equal(term, t)) {
      coef += c;
      return;
    }
  }
  terms.emplace_back(c, t);
}

SmoothExpr build_sum(Complex constant, std::vector<std::pair<Complex, SmoothExpr>> terms) {
  std::erase_if(terms, [](const auto& t) { return t.first == 0.0; });
  if (terms.empty()) return make_constant(constant);
  if (constant == 0.0 && terms.size() == 1 && terms[0].first == 1.0) return terms[0].second;
  Node n;
  n.kind = Kind::sum;
  n.value = constant;
  n.terms = std::move(terms);
  return SmoothExpr(finish(std::move(n)));
}

struct Monomial {
  Complex coef;
  std::vector<std::pair<SmoothExpr, int>> factors;
};

Monomial as_monomial(const SmoothExpr& e) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
      return {n.value, {}};
    case Kind::sum:
      if (n.value == 0.0 && n.terms.size() == 1) {
        Monomial inner = as_monomial(n.terms[0].second);
        inner.coef *= n.terms[0].first;
        return inner;
      }
      return {1.0, {{e, 1}}};
    case Kind::product:
      return {1.0, n.factors};
    default:
      return {1.0, {{e, 1}}};
  }
}

void add_factor(std::vector<std::pair<SmoothExpr, int>>& factors, const SmoothExpr& base, int p) {
  for (auto& [b, q] : factors) {
    if (structurally_equal(b, base)) {
      q += p;
      return;
    }
  }
  factors.emplace_back(base, p);
}

SmoothExpr build_product(Complex coef, std::vector<std::pair<SmoothExpr, int>> factors) {
  if (coef == 0.0) return zero_expr();
  std::erase_if(factors, [](const auto& f) { return f.second == 0; });
  if (factors.empty()) return make_constant(coef);
  SmoothExpr core;
  if (factors.size() == 1 && factors[0].second == 1) {
    core = factors[0].first;
  } else {
    Node n;
    n.kind = Kind::product;
    n.factors = std::move(factors);
    core = SmoothExpr(finish(std::move(n)));
  }
  if (coef == 1.0) return core;
  return build_sum(0.0, {{coef, core}});
}

SmoothExpr make_unary(Kind kind, const SmoothExpr& arg) {
  Node n;
  n.kind = kind;
  n.args = {arg};
  return SmoothExpr(finish(std::move(n)));
}

// ---------------------------------------------------------------- printing

enum Level { kTop = 0, kFactor = 1, kBase = 2 };

std::string print(const SmoothExpr& e, int level);

std::string print_coefficient_term(Complex coef, const SmoothExpr& term) {
  if (coef == 1.0) return print(term, kFactor);
  if (coef == -1.0) return "-" + print(term, kFactor);
  return format_complex(coef) + "*" + print(term, kFactor);
}

bool is_negative_real(Complex c) { return c.imag() == 0.0 && c.real() < 0.0; }

std::string print(const SmoothExpr& e, int level) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant: {
      std::string s = format_complex(n.value);
      if (level >= kBase && is_negative_real(n.value)) return "(" + s + ")";
      return s;
    }
    case Kind::variable:
      return "x";
    case Kind::sum: {
      std::string s;
      bool first = true;
      for (const auto& [coef, term] : n.terms) {
        if (first) {
          s = print_coefficient_term(coef, term);
        } else if (is_negative_real(coef)) {
          s += " - " + print_coefficient_term(-coef, term);
        } else {
          s += " + " + print_coefficient_term(coef, term);
        }
        first = false;
      }
      if (n.value != 0.0) {
        if (is_negative_real(n.value)) {
          s += " - " + format_complex(-n.value);
        } else {
          s += " + " + format_complex(n.value);
        }
      }
      bool single_scaled = n.value == 0.0 && n.terms.size() == 1;
      if (level >= kBase || (level >= kFactor && !single_scaled)) return "(" + s + ")";
      return s;
    }
    case Kind::product: {
      std::string s;
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        const auto& [b, p] = n.factors[i];
        if (i) s += "*";
        s += print(b, p == 1 ? kFactor : kBase);
        if (p != 1) s += p < 0 ? "^(" + std::to_string(p) + ")" : "^" + std::to_string(p);
      }
      return level >= kBase ? "(" + s + ")" : s;
    }
    case Kind::exp:
      return "exp(" + print(n.args[0], kTop) + ")";
    case Kind::sin:
      return "sin(" + print(n.args[0], kTop) + ")";
    case Kind::cos:
      return "cos(" + print(n.args[0], kTop) + ")";
    case Kind::source:
      return "<" + n.src->name() + (n.offset ? "^(" + std::to_string(n.offset) + ")" : "") + ">";
  }
  return {};
}

// ---------------------------------------------------------------- evaluation

using EvalMemo = std::unordered_map<const Node*, Complex>;

Complex eval(const SmoothExpr& e, double x, EvalMemo& memo) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::constant:
      return n.value;
    case Kind::variable:
      return x;
    default:
      break;
  }
  if (auto it = memo.find(&n); it != memo.end()) return it->second;
  Complex r;
  switch (n.kind) {
    case Kind::sum:
      r = n.value;
      for (const auto& [c, t] : n.terms) r += c * eval(t, x, memo);
      break;
    case Kind::product:
      r = 1.0;
      for (const auto& [b, p] : n.factors) {
        Complex v = eval(b, x, memo);
        if (p < 0 && v == 0.0) {
          throw EvaluationError("pole at x=" + format_real(x) + ": " + b.str() + " vanishes");
        }
        r *= ipow(v, p);
      }
      break;
    case Kind::exp:
      r = std::exp(eval(n.args[0], x, memo));
      break;
    case Kind::sin:
      r = std::sin(eval(n.args[0], x, memo));
      break;
    case Kind::cos:
      r = std::cos(eval(n.args[0], x, memo));
      break;
    case Kind::source:
      r = n.src->derivatives(x, n.offset)[static_cast<std::size_t>(n.offset)];
      break;
    default:
      break;
  }
  memo.emplace(&n, r);
  return r;
}

using Series = std::vector<Complex>;
using SeriesMemo = std::unordered_map<const Node*, Series>;

Series series_mul(const Series& a, const Series& b) {
  const std::size_t len = a.size();
  Series c(len, 0.0);
  for (std::size_t k = 0; k < len; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 0; j <= k; ++j) s += a[j] * b[k - j];
    c[k] = s;
  }
  return c;
}

Series series_reciprocal(const Series& a) {
  const std::size_t len = a.size();
  Series r(len, 0.0);
  r[0] = Complex(1.0) / a[0];
  for (std::size_t k = 1; k < len; ++k) {
    Complex s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += a[j] * r[k - j];
    r[k] = -s * r[0];
  }
  return r;
}

Series series_pow(Series base, int p) {
  Series r(base.size(), 0.0);
  r[0] = 1.0;
  while (p > 0) {
    if (p & 1) r = series_mul(r, base);
    p >>= 1;
    if (p) base = series_mul(base, base);
  }
  return r;
}

const Series& taylor(const SmoothExpr& e, double x0, std::size_t len, SeriesMemo& memo) {
  const Node& n = e.node();
  if (auto it = memo.find(&n); it != memo.end()) return it->second;
  Series r(len, 0.0);
  switch (n.kind) {
    case Kind::constant:
      r[0] = n.value;
      break;
    case Kind::variable:
      r[0] = x0;
      if (len > 1) r[1] = 1.0;
      break;
    case Kind::sum:
      r[0] = n.value;
      for (const auto& [c, t] : n.terms) {
        const Series& s = taylor(t, x0, len, memo);
        for (std::size_t k = 0; k < len; ++k) r[k] += c * s[k];
      }
      break;
    case Kind::product:
      r[0] = 1.0;
      for (const auto& [b, p] : n.factors) {
        Series s = taylor(b, x0, len, memo);
        if (p < 0) {
          if (s[0] == 0.0) {
            throw EvaluationError("pole at x=" + format_real(x0) + ": " + b.str() + " vanishes");
          }
          s = series_pow(series_reciprocal(s), -p);
        } else {
          s = series_pow(std::move(s), p);
        }
        r = series_mul(r, s);
      }
      break;
    case Kind::exp: {
      const Series& a = taylor(n.args[0], x0, len, memo);
      r[0] = std::exp(a[0]);
      for (std::size_t k = 1; k < len; ++k) {
        Complex s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * r[k - j];
        r[k] = s / static_cast<double>(k);
      }
      break;
    }
    case Kind::sin:
    case Kind::cos: {
      const Series& a = taylor(n.args[0], x0, len, memo);
      Series sn(len, 0.0), cs(len, 0.0);
      sn[0] = std::sin(a[0]);
      cs[0] = std::cos(a[0]);
      for (std::size_t k = 1; k < len; ++k) {
        Complex ss = 0.0, sc = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
          ss += static_cast<double>(j) * a[j] * cs[k - j];
          sc += static_cast<double>(j) * a[j] * sn[k - j];
        }
        sn[k] = ss / static_cast<double>(k);
        cs[k] = -sc / static_cast<double>(k);
      }
      r = n.kind == Kind::sin ? std::move(sn) : std::move(cs);
      break;
    }
    case Kind::source: {
      const int order = n.offset + static_cast<int>(len) - 1;
      std::vector<Complex> d = n.src->derivatives(x0, order);
      double fact = 1.0;
      for (std::size_t k = 0; k < len; ++k) {
        if (k) fact *= static_cast<double>(k);
        r[k] = d[static_cast<std::size_t>(n.offset) + k] / fact;
      }
      break;
    }
  }
  return memo.emplace(&n, std::move(r)).first->second;
}

// ---------------------------------------------------------------- rewriting

using RewriteMemo = std::unordered_map<const Node*, SmoothExpr>;

SmoothExpr substitute(const SmoothExpr& e, const SmoothExpr& inner, RewriteMemo& memo) {
  const Node& n = e.node();
  if (n.kind == Kind::constant) return e;
  if (n.kind == Kind::variable) return inner;
  if (auto it = memo.find(&n); it != memo.end()) return it->second;
  SmoothExpr r;
  switch (n.kind) {
    case Kind::sum:
      r = n.value;
      for (const auto& [c, t] : n.terms) r = r + c * substitute(t, inner, memo);
      break;
    case Kind::product:
      r = 1.0;
      for (const auto& [b, p] : n.factors) r = r * pow(substitute(b, inner, memo), p);
      break;
    case Kind::exp:
      r = exp(substitute(n.args[0], inner, memo));
      break;
    case Kind::sin:
      r = sin(substitute(n.args[0], inner, memo));
      break;
    case Kind::cos:
      r = cos(substitute(n.args[0], inner, memo));
      break;
    case Kind::source:
      throw ConstructionError("cannot compose a numeric source leaf");
    default:
      break;
  }
  memo.emplace(&n, r);
  return r;
}

SmoothExpr derive(const SmoothExpr& e, RewriteMemo& memo) {
  const Node& n = e.node();
  if (n.kind == Kind::constant) return zero_expr();
  if (n.kind == Kind::variable) return 1.0;
  if (auto it = memo.find(&n); it != memo.end()) return it->second;
  SmoothExpr r;
  switch (n.kind) {
    case Kind::sum: {
      Linear acc{0.0, {}};
      for (const auto& [c, t] : n.terms) {
        Linear d = as_linear(derive(t, memo));
        acc.constant += c * d.constant;
        for (const auto& [dc, dt] : d.terms) add_term(acc.terms, c * dc, dt);
      }
      r = build_sum(acc.constant, std::move(acc.terms));
      break;
    }
    case Kind::product: {
      Linear acc{0.0, {}};
      for (std::size_t i = 0; i < n.factors.size(); ++i) {
        const auto& [b, p] = n.factors[i];
        std::vector<std::pair<SmoothExpr, int>> rest = n.factors;
        rest[i].second = p - 1;
        SmoothExpr term = build_product(static_cast<double>(p), std::move(rest)) * derive(b, memo);
        Linear d = as_linear(term);
        acc.constant += d.constant;
        for (const auto& [dc, dt] : d.terms) add_term(acc.terms, dc, dt);
      }
      r = build_sum(acc.constant, std::move(acc.terms));
      break;
    }
    case Kind::exp:
      r = e * derive(n.args[0], memo);
      break;
    case Kind::sin:
      r = cos(n.args[0]) * derive(n.args[0], memo);
      break;
    case Kind::cos:
      r = -(sin(n.args[0]) * derive(n.args[0], memo));
      break;
    case Kind::source:
      r = SmoothExpr::source(n.src, n.offset + 1);
      break;
    default:
      break;
  }
  memo.emplace(&n, r);
  return r;
}

}  // namespace

// ---------------------------------------------------------------- SmoothExpr

SmoothExpr::SmoothExpr() : node_(zero_expr().node_) {}
SmoothExpr::SmoothExpr(Complex c) : node_(c == 0.0 ? zero_expr().node_ : make_constant(c).node_) {}
SmoothExpr::SmoothExpr(double c) : SmoothExpr(Complex(c)) {}
SmoothExpr::SmoothExpr(int c) : SmoothExpr(Complex(static_cast<double>(c))) {}
SmoothExpr::SmoothExpr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

SmoothExpr SmoothExpr::x() {
  static const SmoothExpr var = [] {
    Node n;
    n.kind = Kind::variable;
    return SmoothExpr(finish(std::move(n)));
  }();
  return var;
}

SmoothExpr SmoothExpr::source(std::shared_ptr<const JetSource> src, int derivative) {
  Node n;
  n.kind = Kind::source;
  n.src = std::move(src);
  n.offset = derivative;
  return SmoothExpr(finish(std::move(n)));
}

Complex SmoothExpr::operator()(double x) const {
  EvalMemo memo;
  return eval(*this, x, memo);
}

bool SmoothExpr::is_zero() const { return node_->kind == Kind::constant && node_->value == 0.0; }
bool SmoothExpr::is_constant() const { return node_->kind == Kind::constant; }
Complex SmoothExpr::constant_value() const { return node_->value; }
bool SmoothExpr::has_source() const { return node_->has_source; }
std::size_t SmoothExpr::hash() const { return node_->hash; }
std::string SmoothExpr::str() const { return print(*this, kTop); }

bool structurally_equal(const SmoothExpr& a, const SmoothExpr& b) {
  if (a.id() == b.id()) return true;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.hash != y.hash || x.kind != y.kind) return false;
  switch (x.kind) {
    case Kind::constant:
      return x.value == y.value;
    case Kind::variable:
      return true;
    case Kind::sum: {
      if (x.value != y.value || x.terms.size() != y.terms.size()) return false;
      std::vector<bool> used(y.terms.size(), false);
      for (const auto& [c, t] : x.terms) {
        bool found = false;
        for (std::size_t j = 0; j < y.terms.size() && !found; ++j) {
          if (!used[j] && y.terms[j].first == c && structurally_equal(t, y.terms[j].second)) {
            used[j] = found = true;
          }
        }
        if (!found) return false;
      }
      return true;
    }
    case Kind::product: {
      if (x.factors.size() != y.factors.size()) return false;
      std::vector<bool> used(y.factors.size(), false);
      for (const auto& [b, p] : x.factors) {
        bool found = false;
        for (std::size_t j = 0; j < y.factors.size() && !found; ++j) {
          if (!used[j] && y.factors[j].second == p && structurally_equal(b, y.factors[j].first)) {
            used[j] = found = true;
          }
        }
        if (!found) return false;
      }
      return true;
    }
    case Kind::exp:
    case Kind::sin:
    case Kind::cos:
      return structurally_equal(x.args[0], y.args[0]);
    case Kind::source:
      return x.src == y.src && x.offset == y.offset;
  }
  return false;
}

SmoothExpr operator+(const SmoothExpr& a, const SmoothExpr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  Linear la = as_linear(a);
  Linear lb = as_linear(b);
  for (const auto& [c, t] : lb.terms) add_term(la.terms, c, t);
  return build_sum(la.constant + lb.constant, std::move(la.terms));
}

SmoothExpr operator*(const SmoothExpr& a, const SmoothExpr& b) {
  if (a.is_zero() || b.is_zero()) return zero_expr();
  if (a.is_constant() && a.constant_value() == 1.0) return b;
  if (b.is_constant() && b.constant_value() == 1.0) return a;
  // Scaling a sum distributes over its terms so that linear combinations stay flat.
  if (a.is_constant() || b.is_constant()) {
    const Complex c = a.is_constant() ? a.constant_value() : b.constant_value();
    const SmoothExpr& other = a.is_constant() ? b : a;
    if (other.node().kind == Kind::sum) {
      Linear l = as_linear(other);
      for (auto& t : l.terms) t.first *= c;
      return build_sum(l.constant * c, std::move(l.terms));
    }
  }
  Monomial ma = as_monomial(a);
  Monomial mb = as_monomial(b);
  for (const auto& [base, p] : mb.factors) add_factor(ma.factors, base, p);
  return build_product(ma.coef * mb.coef, std::move(ma.factors));
}

SmoothExpr operator-(const SmoothExpr& a) { return SmoothExpr(-1.0) * a; }
SmoothExpr operator-(const SmoothExpr& a, const SmoothExpr& b) { return a + (-b); }
SmoothExpr operator*(Complex c, const SmoothExpr& e) { return SmoothExpr(c) * e; }
SmoothExpr operator*(double c, const SmoothExpr& e) { return SmoothExpr(c) * e; }
SmoothExpr operator*(const SmoothExpr& e, Complex c) { return e * SmoothExpr(c); }
SmoothExpr operator*(const SmoothExpr& e, double c) { return e * SmoothExpr(c); }

SmoothExpr operator/(const SmoothExpr& a, const SmoothExpr& b) {
  if (b.is_zero()) throw ConstructionError("division by a structurally zero expression");
  return a * pow(b, -1);
}

SmoothExpr pow(const SmoothExpr& base, int exponent) {
  if (exponent == 0) return 1.0;
  if (exponent == 1) return base;
  if (base.is_constant()) {
    if (base.constant_value() == 0.0 && exponent < 0) {
      throw ConstructionError("division by a structurally zero expression");
    }
    return ipow(base.constant_value(), exponent);
  }
  Monomial m = as_monomial(base);
  for (auto& f : m.factors) f.second *= exponent;
  return build_product(ipow(m.coef, exponent), std::move(m.factors));
}

SmoothExpr exp(const SmoothExpr& arg) {
  if (arg.is_constant()) return std::exp(arg.constant_value());
  return make_unary(Kind::exp, arg);
}

SmoothExpr sin(const SmoothExpr& arg) {
  if (arg.is_constant()) return std::sin(arg.constant_value());
  return make_unary(Kind::sin, arg);
}

SmoothExpr cos(const SmoothExpr& arg) {
  if (arg.is_constant()) return std::cos(arg.constant_value());
  return make_unary(Kind::cos, arg);
}

SmoothExpr compose(const SmoothExpr& outer, const SmoothExpr& inner) {
  RewriteMemo memo;
  return substitute(outer, inner, memo);
}

SmoothExpr combine(CombineOp op, const SmoothExpr& lhs, const SmoothExpr& rhs) {
  switch (op) {
    case CombineOp::add:
      return lhs + rhs;
    case CombineOp::sub:
      return lhs - rhs;
    case CombineOp::mul:
      return lhs * rhs;
    case CombineOp::div:
      return lhs / rhs;
    case CombineOp::compose:
      return compose(lhs, rhs);
    case CombineOp::pow: {
      if (!rhs.is_constant()) throw ConstructionError("exponent must be an integer constant");
      const Complex c = rhs.constant_value();
      const double r = std::round(c.real());
      if (c.imag() != 0.0 || r != c.real()) throw ConstructionError("exponent must be an integer");
      return pow(lhs, static_cast<int>(r));
    }
  }
  return {};
}

SmoothExpr combine(CombineOp op, const SmoothExpr& lhs, int exponent) {
  if (op == CombineOp::pow) return pow(lhs, exponent);
  return combine(op, lhs, SmoothExpr(exponent));
}

SmoothExpr diff(const SmoothExpr& e, int k) {
  SmoothExpr r = e;
  for (int i = 0; i < k; ++i) {
    RewriteMemo memo;
    r = derive(r, memo);
  }
  return r;
}

std::vector<Complex> taylor_coefficients(const SmoothExpr& e, double x0, int k) {
  SeriesMemo memo;
  return taylor(e, x0, static_cast<std::size_t>(k) + 1, memo);
}

Eigen::VectorXcd eval_jet(const SmoothExpr& e, double x0, int k) {
  std::vector<Complex> t = taylor_coefficients(e, x0, k);
  Eigen::VectorXcd jet(k + 1);
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j) fact *= j;
    jet[j] = t[static_cast<std::size_t>(j)] * fact;
  }
  return jet;
}

std::ostream& operator<<(std::ostream& os, const SmoothExpr& e) { return os << e.str(); }

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  std::string im = format_real(c.imag());
  if (c.imag() > 0) im = "+" + im;
  return "(" + format_real(c.real()) + im + "i)";
}

}  // namespace pdist
