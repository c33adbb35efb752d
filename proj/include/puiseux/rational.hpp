#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace puiseux {

/// Exact rational number. Used both for exponents (the index group is Q)
/// and for the base coefficient field.
using Rational = mpq_class;

/// Exponents of x and y are rationals.
using Exponent = Rational;

Rational make_rational(long num, long den = 1);

/// Parses `p`, `-p`, `p/q`. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text: `p` for integers, `p/q` otherwise.
std::string to_string(const Rational& r);

bool is_integer(const Rational& r);

/// Floor/ceil of a rational as an integer rational.
Rational floor(const Rational& r);
Rational ceil(const Rational& r);

/// Rational power r^n for an integer n; r must be nonzero when n < 0.
Rational pow(const Rational& r, long n);

/// Exact q-th root of a rational if it exists (real branches only; for even q
/// the nonnegative root is returned).
std::optional<Rational> exact_root(const Rational& r, unsigned long q);

/// An exponent extended by +infinity. Used for valuations (v(0) = +inf) and
/// truncation orders (an exact series has truncation +inf).
class Valuation {
 public:
  Valuation() = default;  // +infinity
  Valuation(Rational value) : value_(std::move(value)) {}  // NOLINT
  Valuation(long value) : value_(Rational(value)) {}       // NOLINT

  static Valuation infinity() { return Valuation(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  /// Throws std::logic_error when infinite.
  const Rational& value() const;

  friend bool operator==(const Valuation& a, const Valuation& b);
  friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

  friend Valuation operator+(const Valuation& a, const Valuation& b);
  friend Valuation operator-(const Valuation& a, const Rational& b);

  std::string to_string() const;

 private:
  std::optional<Rational> value_;
};

Valuation min(const Valuation& a, const Valuation& b);
Valuation max(const Valuation& a, const Valuation& b);

}  // namespace puiseux
