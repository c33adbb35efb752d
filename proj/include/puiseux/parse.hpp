#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "puiseux/algebraic.hpp"
#include "puiseux/ode.hpp"
#include "puiseux/pv.hpp"

namespace puiseux {

/// Syntax error with a 1-based position in the input text.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses an equation:
///   `lhs = rhs` or a bare expression (= 0) in x and y   -> SeriesPolynomial
///   `dy/dx = rhs` with a sum of monomials                 -> MonomialODE
///   `dy/dx = A/B` with B depending on y                   -> RationalODE
/// Expressions use + - * / ^, parentheses, integer literals, x and y.
/// Exponents are rational literals: `x^2`, `x^-1`, `x^(p/q)`, `y^(-1/2)`.
using Equation = std::variant<SeriesPolynomial, MonomialODE, RationalODE>;

Equation parse_equation(const std::string& text);
SeriesPolynomial parse_algebraic(const std::string& text);
/// A RationalODE whose denominator is a single monomial is returned as a
/// MonomialODE, so this accepts both forms.
std::variant<MonomialODE, RationalODE> parse_ode(const std::string& text);

/// `P = ...; Q = ...` with P, Q polynomials in y over Q(x).
IntegralFactorProblem parse_factor_problem(const std::string& text);
FieldODE parse_field_ode(const std::string& text);

}  // namespace puiseux
