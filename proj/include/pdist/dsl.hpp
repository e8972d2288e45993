#pragma once

// Text syntax for smooth expressions and piecewise distributions.
//
//   dist   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := primary ('^' unary)?
//   primary:= NUMBER | NUMBER 'i' | 'i' | 'x' | ('exp'|'sin'|'cos') '(' dist ')'
//           | 'H' '(' shift ')' | 'Hm' '(' shift ')'
//           | 'delta' "'"* ('^' INT)? '(' shift ')' | '(' dist ')'
//   shift  := 'x' (('+' | '-') REAL)?
//
// '*' is the star product, which is the ordinary product on smooth factors.
// '/' and '^' need smooth operands on the right (and an integer exponent).

#include <string>
#include <string_view>

#include "pdist/piecewise.hpp"

namespace pdist {

/// Throws ParseError on malformed text and InputError when the text denotes
/// a distribution rather than a smooth function.
SmoothExpr parse_smooth(std::string_view text);

PiecewiseDist parse_dist(std::string_view text);

/// Prints in the syntax above; parse_dist(print_dist(f)) reproduces f.
std::string print_dist(const PiecewiseDist& f);

}  // namespace pdist
