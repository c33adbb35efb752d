#pragma once

#include <string>
#include <utility>
#include <vector>

#include "puiseux/rational.hpp"

namespace puiseux {

/// Dense univariate polynomial over Q, coefficients stored low degree first.
/// Always normalized: no trailing zero coefficients, the zero polynomial is
/// the empty vector.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);
  UniPoly(const Rational& constant);  // NOLINT
  UniPoly(long constant) : UniPoly(Rational(constant)) {}  // NOLINT

  static UniPoly monomial(const Rational& c, std::size_t degree);
  static UniPoly variable() { return monomial(Rational(1), 1); }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  Rational leading() const { return coeffs_.empty() ? Rational(0) : coeffs_.back(); }
  /// Lowest index with a nonzero coefficient; 0 for the zero polynomial.
  std::size_t low_degree() const;

  Rational evaluate(const Rational& at) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  UniPoly operator-() const;
  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend bool operator==(const UniPoly& a, const UniPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Euclidean division; throws std::domain_error on a zero divisor.
  static std::pair<UniPoly, UniPoly> divmod(const UniPoly& a, const UniPoly& b);
  /// Monic gcd (zero if both inputs are zero).
  static UniPoly gcd(UniPoly a, UniPoly b);

  /// Infix text in the given variable, highest degree first.
  std::string to_string(const std::string& var) const;

 private:
  void normalize();
  std::vector<Rational> coeffs_;
};

/// Rational roots of a polynomial over Q, with multiplicities, plus the factor
/// that is left after all rational roots are divided out.
struct RootSplit {
  std::vector<std::pair<Rational, int>> roots;  // increasing order
  UniPoly remainder;                            // no rational roots
};

RootSplit rational_roots(const UniPoly& p);

/// Element of Q(t): a reduced fraction num/den with monic den.
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT
  RationalFunction(long c) : RationalFunction(Rational(c)) {}           // NOLINT
  RationalFunction(UniPoly num) : num_(std::move(num)), den_(Rational(1)) {}  // NOLINT
  RationalFunction(UniPoly num, UniPoly den);

  static RationalFunction variable() { return RationalFunction(UniPoly::variable()); }

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const { return den_.is_constant(); }
  /// Value of a constant; throws std::logic_error otherwise.
  Rational constant() const;

  RationalFunction derivative() const;
  RationalFunction inverse() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  /// Integer power (negative exponents invert).
  RationalFunction pow(long n) const;

  std::string to_string(const std::string& var) const;

 private:
  UniPoly num_;
  UniPoly den_{Rational(1)};
};

}  // namespace puiseux
