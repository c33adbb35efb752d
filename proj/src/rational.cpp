#include "puiseux/rational.hpp"

#include <cctype>

namespace puiseux {

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool parse_integer(std::string_view text, mpz_class& out) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
    negative = text[i] == '-';
    ++i;
  }
  if (i == text.size()) return false;
  for (std::size_t j = i; j < text.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(text[j]))) return false;
  out = mpz_class(std::string(text.substr(i)), 10);
  if (negative) out = -out;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  mpz_class num, den = 1;
  bool ok = parse_integer(text.substr(0, slash), num);
  if (ok && slash != std::string_view::npos) {
    auto rest = text.substr(slash + 1);
    ok = !rest.empty() && rest.front() != '-' && rest.front() != '+' && parse_integer(rest, den) && den != 0;
  }
  if (!ok) throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Rational floor(const Rational& r) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Rational ceil(const Rational& r) {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(q);
}

Rational pow(const Rational& r, long n) {
  if (n < 0) {
    if (r == 0) throw std::domain_error("zero to a negative power");
    Rational inv = 1 / r;
    return pow(inv, -n);
  }
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), r.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), r.get_den_mpz_t(), static_cast<unsigned long>(n));
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::optional<Rational> exact_root(const Rational& r, unsigned long q) {
  if (q == 0) return std::nullopt;
  if (q == 1) return r;
  bool negative = r < 0;
  if (negative && q % 2 == 0) return std::nullopt;
  mpz_class num = abs(r.get_num()), den = r.get_den();
  mpz_class rn, rd;
  if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), q)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), q)) return std::nullopt;
  Rational out(negative ? mpz_class(-rn) : rn, rd);
  out.canonicalize();
  return out;
}

const Rational& Valuation::value() const {
  if (!value_) throw std::logic_error("infinite valuation has no value");
  return *value_;
}

bool operator==(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
  return *a.value_ == *b.value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
  if (a.is_infinite()) return b.is_infinite() ? std::strong_ordering::equal : std::strong_ordering::greater;
  if (b.is_infinite()) return std::strong_ordering::less;
  int c = cmp(*a.value_, *b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Valuation operator+(const Valuation& a, const Valuation& b) {
  if (a.is_infinite() || b.is_infinite()) return Valuation::infinity();
  return Valuation(Rational(*a.value_ + *b.value_));
}

Valuation operator-(const Valuation& a, const Rational& b) {
  if (a.is_infinite()) return a;
  return Valuation(Rational(*a.value_ - b));
}

std::string Valuation::to_string() const {
  return value_ ? puiseux::to_string(*value_) : std::string("inf");
}

Valuation min(const Valuation& a, const Valuation& b) { return a <= b ? a : b; }
Valuation max(const Valuation& a, const Valuation& b) { return a >= b ? a : b; }

}  // namespace puiseux
