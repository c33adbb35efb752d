#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "puiseux/poly.hpp"
#include "puiseux/rational.hpp"

namespace puiseux {

/// Coefficient field of the series: Q(C), the rationals with at most one
/// adjoined symbolic free constant C. Plain rational data never leaves the
/// constant subfield.
using Coefficient = RationalFunction;

/// Raised for operations outside their domain (inverting zero, an infinite
/// expansion requested without a truncation cap).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a fractional power is requested without a valid branch root.
class BranchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a negative power of y is evaluated at y = 0.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Truncated generalized Puiseux series sum c_i x^{mu_i} + O(x^trunc).
///
/// The support is finite, strictly increasing, strictly below `trunc`, and
/// never holds a zero coefficient. Terms below `trunc` are exact; nothing is
/// known at or above it. An infinite `trunc` means the finite sum is the
/// whole series.
class PuiseuxSeries {
 public:
  using TermMap = std::map<Exponent, Coefficient>;

  PuiseuxSeries() = default;  // exact zero
  PuiseuxSeries(TermMap terms, Valuation trunc);

  static PuiseuxSeries monomial(const Coefficient& c, const Exponent& e);
  static PuiseuxSeries constant(const Coefficient& c) { return monomial(c, Rational(0)); }
  /// Zero known only below `trunc`.
  static PuiseuxSeries big_o(const Valuation& trunc) { return PuiseuxSeries({}, trunc); }

  const TermMap& terms() const { return terms_; }
  const Valuation& trunc() const { return trunc_; }
  std::size_t size() const { return terms_.size(); }

  /// No known nonzero term (the series may still be nonzero above trunc).
  bool empty() const { return terms_.empty(); }
  bool is_exact() const { return trunc_.is_infinite(); }
  bool is_exact_zero() const { return terms_.empty() && trunc_.is_infinite(); }

  /// Least exponent of the known support, +inf if there is none.
  Valuation valuation() const;
  /// Guaranteed lower bound on the true valuation: min(valuation, trunc).
  Valuation order() const { return min(valuation(), trunc_); }
  const Exponent& leading_exponent() const;
  const Coefficient& leading_coefficient() const;
  Coefficient coefficient(const Exponent& e) const;

  /// True when every coefficient lies in Q.
  bool is_rational() const;

  PuiseuxSeries truncated(const Valuation& t) const;
  /// Terms strictly below e, keeping the current truncation bound.
  PuiseuxSeries below(const Exponent& e) const;
  PuiseuxSeries shifted(const Exponent& e) const;  // times x^e
  PuiseuxSeries scaled(const Coefficient& c) const;

  PuiseuxSeries operator-() const;
  friend PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b);
  friend bool operator==(const PuiseuxSeries& a, const PuiseuxSeries& b) {
    return a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
  }

  /// Canonical text `c0*x^(e0) + c1*x^(e1) + ... + O(x^(t))`. Symbolic
  /// coefficients print in parentheses using `symbol` for the free constant.
  std::string to_string(const std::string& symbol = "C") const;

 private:
  TermMap terms_;
  Valuation trunc_;
};

/// Parses the canonical text form (rational coefficients only).
PuiseuxSeries parse_series(std::string_view text);

/// True when a and b agree term by term strictly below `bound`.
bool agree_below(const PuiseuxSeries& a, const PuiseuxSeries& b, const Valuation& bound);

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b);
PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b);
Valuation valuation(const PuiseuxSeries& a);
PuiseuxSeries differentiate(const PuiseuxSeries& a);

/// 1/a. When a has more than one term the expansion is infinite and is cut at
/// min(a.trunc - 2 v(a), cap); an infinite result without a cap throws.
PuiseuxSeries invert(const PuiseuxSeries& a, const Valuation& cap = Valuation::infinity());

/// Integer power a^n (negative n goes through invert).
PuiseuxSeries pow_int(const PuiseuxSeries& a, long n, const Valuation& cap = Valuation::infinity());

/// Composite coefficients of (1 + r)^sigma for r = sum e_i x^{delta_i},
/// delta_i > 0: every multi-index n over the terms of r with
/// sum n_i delta_i below `precision`, its multinomial weight
///   gamma_n = sigma (sigma-1) ... (sigma-|n|+1) / (n_1! ... n_m!)
/// and the monomial prod e_i^{n_i}. For natural sigma gamma_n is the
/// multinomial sigma! / (n_0! n_1! ... n_m!) with n_0 = sigma - |n|.
struct PowerCoefficients {
  struct Entry {
    std::vector<int> multi_index;
    Exponent exponent;
    Rational gamma;
    Coefficient monomial;
  };
  Exponent sigma;
  std::vector<Entry> entries;
  /// d(delta) = sum of gamma_n * monomial_n over entries with that exponent.
  std::map<Exponent, Coefficient> composite;
};

PowerCoefficients power_coefficients(const PuiseuxSeries& r, const Exponent& sigma, const Valuation& precision);

/// a^sigma = branch * x^{sigma mu0} * (1 + sum d_k x^{delta_k}).
/// For sigma = p/q the branch must satisfy branch^q = c0^p (c0 the leading
/// coefficient of a). For integer sigma the branch may be omitted.
PuiseuxSeries pow_rational(const PuiseuxSeries& a, const Exponent& sigma, const std::optional<Coefficient>& branch,
                           const Valuation& cap = Valuation::infinity());

/// One monomial f x^nu y^sigma of a right-hand side.
struct Monomial {
  Exponent nu;
  Exponent sigma;
  Rational f;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Branch selection for fractional powers of y: the leading coefficient c0 of
/// y is root^s, and c0^sigma is taken as root^(s sigma).
struct BranchChoice {
  Coefficient root;
  long s = 1;
  Coefficient power(const Exponent& sigma) const;
};

/// sum f x^nu y^sigma evaluated at the series y, cut at `cap`.
PuiseuxSeries substitute_series(std::span<const Monomial> rhs, const PuiseuxSeries& y,
                                const Valuation& cap = Valuation::infinity(),
                                const std::optional<BranchChoice>& branch = std::nullopt);

}  // namespace puiseux
