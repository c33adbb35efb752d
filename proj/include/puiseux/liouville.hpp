#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "puiseux/poly.hpp"

namespace puiseux {

/// Raised for expressions that cannot be formed (division by an expression
/// whose normal form is zero, an algebraic root of a constant polynomial).
class MalformedExpression : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Outcome of the structural zero test. `inconclusive` means the normal form
/// is nonzero but could vanish through an identity between tower nodes that
/// the normalization does not see.
enum class ZeroTest { zero, nonzero, inconclusive };

std::string to_string(ZeroTest z);

struct NormalForm;

/// Immutable element of a liouvillian tower over Q(x) with d/dx:
/// rational functions closed under +, *, inverse, formal integrals
/// (int f), exponentials of integrals (exp (int f)) and algebraic roots
/// (root p k) of polynomials p in y over Q(x). Integrals are never evaluated.
///
/// Every node carries a normal form (a quotient of Laurent polynomials in the
/// tower nodes with Q(x) coefficients; exponentials multiply by adding their
/// integrands, powers of a root are reduced modulo its polynomial) computed at
/// construction, so the zero test and equality are cheap and thread safe.
class Expr {
 public:
  enum class Kind { rational, add, mul, inverse, integral, exp_integral, root };

  Expr();  // zero
  Expr(const RationalFunction& r);  // NOLINT
  Expr(const Rational& r) : Expr(RationalFunction(r)) {}  // NOLINT
  Expr(long c) : Expr(RationalFunction(c)) {}  // NOLINT

  static Expr x();
  /// Formal antiderivative; (int 0) is 0.
  static Expr integral(const Expr& f);
  /// exp of the formal antiderivative of f; f = 0 gives 1.
  static Expr exp_integral(const Expr& f);
  /// Root number `branch` of sum poly[i] y^i; the polynomial must have
  /// degree >= 1 (it is made monic).
  static Expr root(std::vector<RationalFunction> poly, long branch);

  Kind kind() const;
  const std::vector<Expr>& children() const;
  /// Value of a rational leaf.
  const RationalFunction& value() const;
  const std::vector<RationalFunction>& root_polynomial() const;
  long root_branch() const;

  /// Exact symbolic derivative.
  Expr derivative() const;

  ZeroTest zero_test() const;
  bool is_zero() const { return zero_test() == ZeroTest::zero; }
  /// The element of Q(x) when the normal form has no tower nodes.
  std::optional<RationalFunction> as_rational() const;
  /// Number of nodes of the given kind in the tree.
  std::size_t count(Kind k) const;

  /// Prefix text: (+ a b), (* a b), (inv a), (int f), (exp (int f)),
  /// (root {p} k); rational leaves print bare or in braces when they contain
  /// spaces.
  std::string to_string() const;

  const NormalForm& normal_form() const;

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  /// Throws MalformedExpression when b is structurally zero.
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& b) { return *this = *this + b; }
  Expr& operator*=(const Expr& b) { return *this = *this * b; }

  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

 private:
  std::shared_ptr<const Node> node_;
};

Expr pow(const Expr& a, long n);

/// Zero test of a - b.
ZeroTest equal(const Expr& a, const Expr& b);

/// Antiderivative: Laurent polynomials without an x^-1 term integrate to
/// rational functions, everything else becomes an (int f) node.
Expr integrate(const Expr& f);

/// exp(int f), pulling out x^c when f is a Laurent polynomial whose x^-1
/// coefficient c is an integer.
Expr exp_integrate(const Expr& f);

/// Parses the prefix text form. Rational leaves use the infix grammar of
/// parse_rational_function. Throws MalformedExpression.
Expr parse_expr(const std::string& text);

/// Infix rational function in x: numbers, x, + - * / ^ (integer exponents),
/// parentheses. Throws MalformedExpression.
RationalFunction parse_rational_function(const std::string& text);

/// Infix polynomial in y over Q(x) (y only to natural powers, division only
/// by y-free factors); coefficients low degree first.
std::vector<RationalFunction> parse_y_polynomial(const std::string& text);

/// Infix text of sum poly[i] y^i.
std::string y_polynomial_to_string(const std::vector<RationalFunction>& poly);

}  // namespace puiseux
