#include "pdist/dsl.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "pdist/errors.hpp"
#include "pdist/star.hpp"

namespace pdist {
namespace {

enum class Tok { number, ident, symbol, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double value = 0.0;
  bool imaginary = false;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    // U+2212 MINUS SIGN is accepted as '-'.
    if (src_.substr(pos_, 3) == "\xE2\x88\x92") {
      advance(3);
      t.kind = Tok::symbol;
      t.text = "-";
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.')) ++end;
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
        if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
          while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
          end = e;
        }
      }
      t.kind = Tok::number;
      t.text = std::string(src_.substr(pos_, end - pos_));
      char* stop = nullptr;
      t.value = std::strtod(t.text.c_str(), &stop);
      if (stop != t.text.c_str() + t.text.size()) {
        throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
      }
      advance(end - pos_);
      // A trailing 'i' not followed by an identifier character makes it imaginary.
      if (pos_ < src_.size() && src_[pos_] == 'i' &&
          (pos_ + 1 >= src_.size() || !std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])))) {
        t.imaginary = true;
        advance(1);
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) ++end;
      t.kind = Tok::ident;
      t.text = std::string(src_.substr(pos_, end - pos_));
      advance(end - pos_);
      return t;
    }
    static const std::string symbols = "+-*/^()'";
    if (symbols.find(c) != std::string::npos) {
      t.kind = Tok::symbol;
      t.text = std::string(1, c);
      advance(1);
      return t;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance(1);
  }
  void advance(std::size_t count) {
    for (std::size_t k = 0; k < count && pos_ < src_.size(); ++k) {
      if (src_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++column_;
      }
      ++pos_;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// Either a smooth expression or a general distribution.
struct Value {
  std::optional<SmoothExpr> smooth;
  PiecewiseDist dist;

  static Value of(SmoothExpr s) { return {std::move(s), {}}; }
  static Value of(PiecewiseDist d) { return {std::nullopt, std::move(d)}; }
  PiecewiseDist as_dist() const { return smooth ? PiecewiseDist(*smooth) : dist; }
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  Value parse_all() {
    Value v = dist();
    if (tok_.kind != Tok::end) fail("unexpected '" + tok_.text + "' after a complete expression");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_.line, tok_.column); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.column);
  }

  bool is(const char* sym) const { return tok_.kind == Tok::symbol && tok_.text == sym; }
  bool is_ident(const char* name) const { return tok_.kind == Tok::ident && tok_.text == name; }
  void bump() { tok_ = lex_.next(); }
  void expect(const char* sym) {
    if (!is(sym)) fail(std::string("expected '") + sym + "'" + found());
    bump();
  }
  std::string found() const {
    return tok_.kind == Tok::end ? " but the input ended" : " but found '" + tok_.text + "'";
  }

  Value dist() {
    Value v = term();
    while (is("+") || is("-")) {
      const bool minus = is("-");
      bump();
      Value r = term();
      if (v.smooth && r.smooth) {
        v = Value::of(minus ? *v.smooth - *r.smooth : *v.smooth + *r.smooth);
      } else {
        v = Value::of(minus ? v.as_dist() - r.as_dist() : v.as_dist() + r.as_dist());
      }
    }
    return v;
  }

  Value term() {
    Value v = unary();
    while (is("*") || is("/")) {
      const bool divide = is("/");
      const Token op = tok_;
      bump();
      Value r = unary();
      if (divide) {
        if (!r.smooth) fail_at(op, "the divisor must be a smooth expression");
        if (r.smooth->is_zero()) fail_at(op, "division by zero");
        if (v.smooth) {
          v = Value::of(*v.smooth / *r.smooth);
        } else {
          v = Value::of(star(v.dist, PiecewiseDist(SmoothExpr(1.0) / *r.smooth)));
        }
      } else if (v.smooth && r.smooth) {
        v = Value::of(*v.smooth * *r.smooth);
      } else {
        v = Value::of(star(v.as_dist(), r.as_dist()));
      }
    }
    return v;
  }

  Value unary() {
    if (is("-")) {
      bump();
      Value v = unary();
      return v.smooth ? Value::of(-*v.smooth) : Value::of(-v.dist);
    }
    if (is("+")) {
      bump();
      return unary();
    }
    return power();
  }

  Value power() {
    Value base = primary();
    if (!is("^")) return base;
    const Token op = tok_;
    bump();
    Value e = unary();
    if (!base.smooth) fail_at(op, "'^' needs a smooth base");
    if (!e.smooth || !e.smooth->is_constant()) fail_at(op, "exponent must be an integer constant");
    const Complex p = e.smooth->constant_value();
    if (p.imag() != 0.0 || p.real() != std::round(p.real()) || std::abs(p.real()) > 1e6) {
      fail_at(op, "exponent must be an integer constant");
    }
    const int k = static_cast<int>(p.real());
    if (k < 0 && base.smooth->is_zero()) fail_at(op, "division by zero");
    return Value::of(pow(*base.smooth, k));
  }

  double shift() {
    if (!is_ident("x")) fail("expected 'x' in a shifted argument" + found());
    bump();
    if (is(")")) return 0.0;
    const bool minus = is("-");
    if (!minus && !is("+")) fail("expected '+', '-' or ')'" + found());
    bump();
    if (tok_.kind != Tok::number || tok_.imaginary) fail("expected a real shift" + found());
    const double c = tok_.value;
    bump();
    return minus ? c : -c;
  }

  Value primary() {
    const Token t = tok_;
    if (t.kind == Tok::number) {
      bump();
      return Value::of(SmoothExpr(t.imaginary ? Complex(0.0, t.value) : Complex(t.value, 0.0)));
    }
    if (t.kind == Tok::symbol && t.text == "(") {
      bump();
      Value v = dist();
      expect(")");
      return v;
    }
    if (t.kind != Tok::ident) fail("expected an expression" + found());
    if (t.text == "x") {
      bump();
      return Value::of(SmoothExpr::x());
    }
    if (t.text == "i") {
      bump();
      return Value::of(SmoothExpr(Complex(0.0, 1.0)));
    }
    if (t.text == "exp" || t.text == "sin" || t.text == "cos") {
      bump();
      expect("(");
      Value arg = dist();
      if (!arg.smooth) fail_at(t, t.text + " needs a smooth argument");
      expect(")");
      const SmoothExpr& a = *arg.smooth;
      return Value::of(t.text == "exp" ? exp(a) : t.text == "sin" ? sin(a) : cos(a));
    }
    if (t.text == "H" || t.text == "Hm") {
      bump();
      expect("(");
      const double at = shift();
      expect(")");
      return Value::of(t.text == "H" ? PiecewiseDist::heaviside(at) : PiecewiseDist::heaviside_minus(at));
    }
    if (t.text == "delta") {
      bump();
      int order = 0;
      while (is("'")) {
        ++order;
        bump();
      }
      if (is("^")) {
        bump();
        if (tok_.kind != Tok::number || tok_.imaginary || tok_.value != std::floor(tok_.value) ||
            tok_.value < 0 || tok_.value > 1000) {
          fail("expected a non-negative integer delta order" + found());
        }
        order += static_cast<int>(tok_.value);
        bump();
      }
      expect("(");
      const double at = shift();
      expect(")");
      return Value::of(PiecewiseDist::delta(order, at));
    }
    fail_at(t, "unknown name '" + t.text + "'");
  }

  Lexer lex_;
  Token tok_;
};

std::string shifted(double at) {
  if (at == 0.0) return "x";
  return at > 0 ? "x-" + format_real(at) : "x+" + format_real(-at);
}

}  // namespace

SmoothExpr parse_smooth(std::string_view text) {
  Value v = Parser(text).parse_all();
  if (!v.smooth) throw InputError("expected a smooth expression, got a distribution");
  return *v.smooth;
}

PiecewiseDist parse_dist(std::string_view text) {
  Value v = Parser(text).parse_all();
  return v.as_dist();
}

std::string print_dist(const PiecewiseDist& f) {
  const auto& xs = f.breakpoints();
  std::vector<std::string> terms;
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const SmoothExpr& p = f.pieces()[i];
    if (p.is_zero()) continue;
    std::string s = "(" + p.str() + ")";
    if (i > 0) s += "*H(" + shifted(xs[i - 1]) + ")";
    if (i < xs.size()) s += "*Hm(" + shifted(xs[i]) + ")";
    terms.push_back(std::move(s));
  }
  for (const auto& d : f.delta_terms()) {
    terms.push_back("(" + format_complex(d.coefficient) + ")*delta^" + std::to_string(d.order) + "(" +
                    shifted(xs[d.point_index]) + ")");
  }
  if (terms.empty()) return "0";
  std::string out = terms[0];
  for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
  return out;
}

}  // namespace pdist
