#include "puiseux/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace puiseux {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

UniPoly::UniPoly(const Rational& constant) {
  if (constant != 0) coeffs_.push_back(constant);
}

UniPoly UniPoly::monomial(const Rational& c, std::size_t degree) {
  std::vector<Rational> v(degree + 1, Rational(0));
  v[degree] = c;
  return UniPoly(std::move(v));
}

void UniPoly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

std::size_t UniPoly::low_degree() const {
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) return i;
  return 0;
}

Rational UniPoly::evaluate(const Rational& at) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> v(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<long>(i);
  return UniPoly(std::move(v));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return *this;
  Rational lc = leading();
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c /= lc;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::operator-() const {
  std::vector<Rational> v = coeffs_;
  for (auto& c : v) c = -c;
  return UniPoly(std::move(v));
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) v[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) v[i] += b.coeffs_[i];
  return UniPoly(std::move(v));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) { return a + (-b); }

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return UniPoly(std::move(v));
}

std::pair<UniPoly, UniPoly> UniPoly::divmod(const UniPoly& a, const UniPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {UniPoly(), a};
  std::vector<Rational> rem = a.coeffs_;
  std::vector<Rational> quo(a.coeffs_.size() - b.coeffs_.size() + 1, Rational(0));
  const Rational& lc = b.coeffs_.back();
  for (long i = static_cast<long>(quo.size()) - 1; i >= 0; --i) {
    Rational q = rem[static_cast<std::size_t>(i) + b.coeffs_.size() - 1] / lc;
    quo[static_cast<std::size_t>(i)] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) rem[static_cast<std::size_t>(i) + j] -= q * b.coeffs_[j];
  }
  return {UniPoly(std::move(quo)), UniPoly(std::move(rem))};
}

UniPoly UniPoly::gcd(UniPoly a, UniPoly b) {
  while (!b.is_zero()) {
    UniPoly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

void append_term(std::ostringstream& os, bool first, const Rational& c, std::size_t degree, const std::string& var) {
  Rational mag = abs(c);
  if (first) {
    if (c < 0) os << "-";
  } else {
    os << (c < 0 ? " - " : " + ");
  }
  if (degree == 0) {
    os << to_string(mag);
    return;
  }
  if (mag != 1) os << to_string(mag) << "*";
  os << var;
  if (degree > 1) os << "^" << degree;
}

}  // namespace

std::string UniPoly::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    if (coeffs_[i] == 0) continue;
    append_term(os, first, coeffs_[i], i, var);
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// rational roots

namespace {

std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  std::vector<std::pair<mpz_class, int>> factors;
  for (mpz_class p = 2; p * p <= n && p < 1000000; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) factors.emplace_back(p, e);
  }
  // Cofactor above the trial-division limit is taken as prime; a composite
  // cofactor can only hide roots, which then stay in the remainder.
  if (n > 1) factors.emplace_back(n, 1);
  std::vector<mpz_class> out{1};
  for (const auto& [p, e] : factors) {
    std::size_t base = out.size();
    mpz_class pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

// Integer primitive form: same roots, integer coefficients.
std::vector<mpz_class> primitive(const UniPoly& p) {
  mpz_class l = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> v;
  mpz_class g = 0;
  for (const auto& c : p.coeffs()) {
    Rational s = c * Rational(l);
    v.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
  }
  if (g != 0)
    for (auto& c : v) c /= g;
  return v;
}

}  // namespace

RootSplit rational_roots(const UniPoly& p) {
  RootSplit out;
  if (p.degree() <= 0) {
    out.remainder = p;
    return out;
  }
  std::map<Rational, int> found;
  UniPoly work = p;
  std::size_t zero = work.low_degree();
  if (zero > 0) {
    found[Rational(0)] += static_cast<int>(zero);
    std::vector<Rational> shifted(work.coeffs().begin() + static_cast<long>(zero), work.coeffs().end());
    work = UniPoly(std::move(shifted));
  }
  auto take = [&](const Rational& r) {
    UniPoly lin(std::vector<Rational>{-r, Rational(1)});
    while (work.degree() >= 1 && work.evaluate(r) == 0) {
      work = UniPoly::divmod(work, lin).first;
      ++found[r];
    }
  };
  while (work.degree() >= 1) {
    if (work.degree() == 1) {
      take(-work.coeff(0) / work.coeff(1));
      continue;
    }
    if (work.degree() == 2) {
      Rational a = work.coeff(2), b = work.coeff(1), c = work.coeff(0);
      Rational disc = b * b - 4 * a * c;
      auto s = disc >= 0 ? exact_root(disc, 2) : std::nullopt;
      if (!s) break;
      take((-b + *s) / (2 * a));
      if (work.degree() >= 1) take((-b - *s) / (2 * a));
      continue;
    }
    auto ints = primitive(work);
    bool progress = false;
    auto dens = divisors(ints.back());
    auto nums = divisors(ints.front());
    for (const auto& d : nums) {
      for (const auto& e : dens) {
        for (int sign : {1, -1}) {
          Rational r(sign * d, e);
          r.canonicalize();
          if (work.evaluate(r) == 0) {
            take(r);
            progress = true;
            break;
          }
        }
        if (progress) break;
      }
      if (progress) break;
    }
    if (!progress) break;
  }
  for (const auto& [r, m] : found) out.roots.emplace_back(r, m);
  out.remainder = work;
  return out;
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(UniPoly num, UniPoly den) {
  if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
  if (num.is_zero()) {
    num_ = UniPoly();
    den_ = UniPoly(Rational(1));
    return;
  }
  if (!den.is_constant()) {
    UniPoly g = UniPoly::gcd(num, den);
    if (g.degree() > 0) {
      num = UniPoly::divmod(num, g).first;
      den = UniPoly::divmod(den, g).first;
    }
  }
  Rational lc = den.leading();
  if (lc != 1) {
    num = num * UniPoly(Rational(1) / lc);
    den = den * UniPoly(Rational(1) / lc);
  }
  num_ = std::move(num);
  den_ = std::move(den);
}

Rational RationalFunction::constant() const {
  if (!is_constant()) throw std::logic_error("rational function is not constant");
  return num_.coeff(0);
}

RationalFunction RationalFunction::derivative() const {
  if (is_polynomial()) return RationalFunction(num_.derivative());
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_constant() && b.is_constant()) return RationalFunction(a.num_.coeff(0) + b.num_.coeff(0));
  if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ + b.num_);
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_constant() && b.is_constant()) return RationalFunction(a.num_.coeff(0) * b.num_.coeff(0));
  if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (b.is_constant()) return RationalFunction(a.num_ * UniPoly(Rational(1) / b.constant()), a.den_);
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  RationalFunction result(Rational(1)), base = *this;
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

std::string RationalFunction::to_string(const std::string& var) const {
  if (is_polynomial()) return num_.to_string(var);
  std::string n = num_.to_string(var), d = den_.to_string(var);
  if (num_.coeffs().size() > 1 || n.front() == '-') n = "(" + n + ")";
  return n + "/(" + d + ")";
}

}  // namespace puiseux
