#include "puiseux/series.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace puiseux {

PuiseuxSeries::PuiseuxSeries(TermMap terms, Valuation trunc) : trunc_(std::move(trunc)) {
  for (auto& [e, c] : terms) {
    if (c.is_zero()) continue;
    if (trunc_.is_finite() && e >= trunc_.value()) break;
    terms_.emplace_hint(terms_.end(), e, std::move(c));
  }
}

PuiseuxSeries PuiseuxSeries::monomial(const Coefficient& c, const Exponent& e) {
  return PuiseuxSeries(TermMap{{e, c}}, Valuation::infinity());
}

Valuation PuiseuxSeries::valuation() const {
  if (terms_.empty()) return Valuation::infinity();
  return Valuation(terms_.begin()->first);
}

const Exponent& PuiseuxSeries::leading_exponent() const {
  if (terms_.empty()) throw DomainError("leading exponent of a series with no known terms");
  return terms_.begin()->first;
}

const Coefficient& PuiseuxSeries::leading_coefficient() const {
  if (terms_.empty()) throw DomainError("leading coefficient of a series with no known terms");
  return terms_.begin()->second;
}

Coefficient PuiseuxSeries::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Coefficient() : it->second;
}

bool PuiseuxSeries::is_rational() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_constant(); });
}

PuiseuxSeries PuiseuxSeries::truncated(const Valuation& t) const {
  if (t >= trunc_) return *this;
  return PuiseuxSeries(terms_, t);
}

PuiseuxSeries PuiseuxSeries::below(const Exponent& e) const {
  PuiseuxSeries out;
  out.trunc_ = trunc_;
  for (const auto& [k, c] : terms_) {
    if (k >= e) break;
    out.terms_.emplace_hint(out.terms_.end(), k, c);
  }
  return out;
}

PuiseuxSeries PuiseuxSeries::shifted(const Exponent& e) const {
  PuiseuxSeries out;
  out.trunc_ = trunc_.is_finite() ? Valuation(Rational(trunc_.value() + e)) : trunc_;
  for (const auto& [k, c] : terms_) out.terms_.emplace_hint(out.terms_.end(), Rational(k + e), c);
  return out;
}

PuiseuxSeries PuiseuxSeries::scaled(const Coefficient& c) const {
  if (c.is_zero()) return PuiseuxSeries({}, trunc_);
  PuiseuxSeries out;
  out.trunc_ = trunc_;
  for (const auto& [k, v] : terms_) out.terms_.emplace_hint(out.terms_.end(), k, v * c);
  return out;
}

PuiseuxSeries PuiseuxSeries::operator-() const { return scaled(Coefficient(-1)); }

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  Valuation t = min(a.trunc_, b.trunc_);
  // Sorted merge; zero sums are dropped by the constructor.
  PuiseuxSeries::TermMap terms;
  auto below = [&](const Exponent& e) { return t.is_infinite() || e < t.value(); };
  auto ia = a.terms_.begin(), ib = b.terms_.begin();
  while (true) {
    bool has_a = ia != a.terms_.end() && below(ia->first);
    bool has_b = ib != b.terms_.end() && below(ib->first);
    if (!has_a && !has_b) break;
    if (has_a && (!has_b || ia->first < ib->first)) {
      terms.emplace_hint(terms.end(), ia->first, ia->second);
      ++ia;
    } else if (has_b && (!has_a || ib->first < ia->first)) {
      terms.emplace_hint(terms.end(), ib->first, ib->second);
      ++ib;
    } else {
      terms.emplace_hint(terms.end(), ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return PuiseuxSeries(std::move(terms), t);
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  // Exact below min(order(a) + trunc(b), order(b) + trunc(a)).
  Valuation t = min(a.order() + b.trunc_, b.order() + a.trunc_);
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const auto& [e, c] = *(a.terms_.size() == 1 ? a.terms_.begin() : b.terms_.begin());
    const PuiseuxSeries& other = a.terms_.size() == 1 ? b : a;
    PuiseuxSeries out = other.shifted(e).scaled(c);
    out.trunc_ = t;
    if (t.is_finite()) out.terms_.erase(out.terms_.lower_bound(t.value()), out.terms_.end());
    return out;
  }
  PuiseuxSeries::TermMap terms;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Rational e = ea + eb;
      if (t.is_finite() && e >= t.value()) break;
      auto [it, inserted] = terms.emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  return PuiseuxSeries(std::move(terms), t);
}

namespace {

std::string coefficient_text(const Coefficient& c, const std::string& symbol) {
  if (c.is_constant()) return puiseux::to_string(c.constant());
  return "(" + c.to_string(symbol) + ")";
}

}  // namespace

std::string PuiseuxSeries::to_string(const std::string& symbol) const {
  if (terms_.empty() && trunc_.is_infinite()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << coefficient_text(c, symbol) << "*x^(" << puiseux::to_string(e) << ")";
  }
  if (trunc_.is_finite()) {
    if (!first) os << " + ";
    os << "O(x^(" << puiseux::to_string(trunc_.value()) << "))";
  }
  return os.str();
}

namespace {

std::string strip(std::string_view s) {
  std::string out;
  for (char ch : s)
    if (ch != ' ' && ch != '\t' && ch != '\n') out.push_back(ch);
  return out;
}

Rational parse_power_of_x(const std::string& s, std::size_t pos, const std::string& whole) {
  // expects "x^(e)" starting at pos and ending the string
  if (s.compare(pos, 3, "x^(") != 0 || s.back() != ')')
    throw std::invalid_argument("malformed series term in '" + whole + "'");
  return parse_rational(std::string_view(s).substr(pos + 3, s.size() - pos - 4));
}

}  // namespace

PuiseuxSeries parse_series(std::string_view text) {
  std::string s = strip(text);
  if (s == "0") return {};
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == '+' && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  PuiseuxSeries::TermMap terms;
  Valuation trunc = Valuation::infinity();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& p = parts[i];
    if (p.empty()) throw std::invalid_argument("empty term in series '" + std::string(text) + "'");
    if (p.rfind("O(", 0) == 0) {
      if (i + 1 != parts.size() || p.back() != ')')
        throw std::invalid_argument("O(...) must close the series '" + std::string(text) + "'");
      trunc = Valuation(parse_power_of_x(p.substr(2, p.size() - 3), 0, std::string(text)));
      continue;
    }
    auto star = p.find('*');
    // A bare rational stands for c*x^(0).
    Rational c = parse_rational(std::string_view(p).substr(0, star));
    Rational e = star == std::string::npos ? Rational(0) : parse_power_of_x(p, star + 1, std::string(text));
    if (terms.count(e)) throw std::invalid_argument("repeated exponent in series '" + std::string(text) + "'");
    terms.emplace(e, Coefficient(c));
  }
  return PuiseuxSeries(std::move(terms), trunc);
}

bool agree_below(const PuiseuxSeries& a, const PuiseuxSeries& b, const Valuation& bound) {
  auto cut = [&](const PuiseuxSeries& s) {
    std::map<Exponent, Coefficient> out;
    for (const auto& [e, c] : s.terms()) {
      if (bound.is_finite() && e >= bound.value()) break;
      out.emplace(e, c);
    }
    return out;
  };
  return cut(a) == cut(b);
}

PuiseuxSeries add(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + b; }
PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a * b; }
Valuation valuation(const PuiseuxSeries& a) { return a.valuation(); }

PuiseuxSeries differentiate(const PuiseuxSeries& a) {
  PuiseuxSeries::TermMap terms;
  for (const auto& [e, c] : a.terms()) {
    if (e == 0) continue;
    terms.emplace(Rational(e - 1), c * Coefficient(e));
  }
  Valuation t = a.trunc().is_finite() ? Valuation(Rational(a.trunc().value() - 1)) : a.trunc();
  return PuiseuxSeries(std::move(terms), t);
}

namespace {

// a = c0 x^mu0 (1 + r); returns r (positive exponents, relative truncation).
PuiseuxSeries relative_tail(const PuiseuxSeries& a) {
  const Exponent& mu0 = a.leading_exponent();
  Coefficient inv = a.leading_coefficient().inverse();
  PuiseuxSeries r = a.shifted(-mu0).scaled(inv);
  return r - PuiseuxSeries::constant(Coefficient(1));
}

Valuation relative_precision(const PuiseuxSeries& a, const Valuation& cap, const Exponent& result_shift) {
  Valuation p = a.trunc() - a.leading_exponent();
  if (cap.is_finite()) p = min(p, Valuation(Rational(cap.value() - result_shift)));
  return p;
}

// The whole result lies at or above its truncation.
bool nothing_known(const Valuation& p) { return p.is_finite() && p.value() <= 0; }

// (1 + r)^n for integer n >= 0 by binary powering, cut at p.
PuiseuxSeries unit_power(const PuiseuxSeries& one_plus_r, long n, const Valuation& p) {
  PuiseuxSeries result = PuiseuxSeries::constant(Coefficient(1)).truncated(p);
  PuiseuxSeries base = one_plus_r.truncated(p);
  while (n > 0) {
    if (n & 1) result = (result * base).truncated(p);
    n >>= 1;
    if (n > 0) base = (base * base).truncated(p);
  }
  return result;
}

// 1/(1 + r) by the geometric series, cut at p.
PuiseuxSeries unit_inverse(const PuiseuxSeries& r, const Valuation& p) {
  if (r.is_exact_zero()) return PuiseuxSeries::constant(Coefficient(1));
  if (p.is_infinite()) throw DomainError("infinite inverse expansion requested without a truncation cap");
  PuiseuxSeries neg = (-r).truncated(p);
  PuiseuxSeries term = PuiseuxSeries::constant(Coefficient(1)).truncated(p);
  PuiseuxSeries sum = term;
  while (true) {
    term = (term * neg).truncated(p);
    if (term.empty()) break;
    sum = sum + term;
  }
  return sum.truncated(p);
}

}  // namespace

PuiseuxSeries invert(const PuiseuxSeries& a, const Valuation& cap) {
  if (a.empty()) throw DomainError("inverse of a zero series");
  const Exponent mu0 = a.leading_exponent();
  Coefficient c0_inv = a.leading_coefficient().inverse();
  PuiseuxSeries r = relative_tail(a);
  Valuation p = relative_precision(a, cap, Rational(-mu0));
  if (nothing_known(p)) return PuiseuxSeries::big_o(Valuation(Rational(p.value() - mu0)));
  return unit_inverse(r, p).scaled(c0_inv).shifted(-mu0);
}

PuiseuxSeries pow_int(const PuiseuxSeries& a, long n, const Valuation& cap) {
  if (n == 0) return PuiseuxSeries::constant(Coefficient(1));
  if (a.empty()) {
    if (n < 0) throw DomainError("negative power of a zero series");
    if (a.is_exact()) return {};
    return PuiseuxSeries::big_o(Valuation(Rational(a.trunc().value() * n)));
  }
  const Exponent mu0 = a.leading_exponent();
  Exponent shift = mu0 * n;
  Coefficient lead = a.leading_coefficient().pow(n);
  PuiseuxSeries r = relative_tail(a);
  Valuation p = relative_precision(a, cap, shift);
  if (nothing_known(p)) return PuiseuxSeries::big_o(Valuation(Rational(p.value() + shift)));
  PuiseuxSeries unit = r.is_exact_zero() ? PuiseuxSeries::constant(Coefficient(1))
                       : n > 0            ? unit_power(PuiseuxSeries::constant(Coefficient(1)) + r, n, p)
                                          : unit_power(unit_inverse(r, p), -n, p);
  return unit.scaled(lead).shifted(shift);
}

PowerCoefficients power_coefficients(const PuiseuxSeries& r, const Exponent& sigma, const Valuation& precision) {
  PowerCoefficients out;
  out.sigma = sigma;
  std::vector<std::pair<Exponent, Coefficient>> tail(r.terms().begin(), r.terms().end());
  for (const auto& [e, c] : tail)
    if (e <= 0) throw std::invalid_argument("power_coefficients needs a tail with positive exponents");
  Valuation p = min(precision, r.trunc());
  const bool natural = is_integer(sigma) && sigma >= 0;
  if (p.is_infinite() && !natural && !tail.empty())
    throw DomainError("non-natural power of an infinite expansion requested without a truncation cap");
  const long max_order = natural ? sigma.get_num().get_si() : -1;

  std::vector<int> n(tail.size(), 0);
  std::function<void(std::size_t, int, Rational, Coefficient, Rational)> walk =
      [&](std::size_t i, int order, Rational exponent, Coefficient mono, Rational denom) {
        if (i == tail.size()) {
          Rational falling = 1;
          for (int k = 0; k < order; ++k) falling *= sigma - k;
          Rational gamma = falling / denom;
          if (gamma == 0) return;
          out.entries.push_back({n, exponent, gamma, mono});
          auto [it, inserted] = out.composite.emplace(exponent, mono * Coefficient(gamma));
          if (!inserted) it->second += mono * Coefficient(gamma);
          return;
        }
        Rational e = exponent;
        Coefficient m = mono;
        Rational d = denom;
        for (int k = 0;; ++k) {
          n[i] = k;
          walk(i + 1, order + k, e, m, d);
          e += tail[i].first;
          if (p.is_finite() && e >= p.value()) break;
          if (natural && order + k + 1 > max_order) break;
          m = m * tail[i].second;
          d *= k + 1;
        }
        n[i] = 0;
      };
  walk(0, 0, Rational(0), Coefficient(1), Rational(1));
  for (auto it = out.composite.begin(); it != out.composite.end();)
    it = it->second.is_zero() ? out.composite.erase(it) : std::next(it);
  return out;
}

PuiseuxSeries pow_rational(const PuiseuxSeries& a, const Exponent& sigma, const std::optional<Coefficient>& branch,
                           const Valuation& cap) {
  if (a.empty()) {
    if (sigma < 0) throw DomainError("negative power of a zero series");
    if (sigma == 0) return PuiseuxSeries::constant(Coefficient(1));
    if (a.is_exact()) return {};
    return PuiseuxSeries::big_o(Valuation(Rational(a.trunc().value() * sigma)));
  }
  const long p = sigma.get_num().get_si();
  const unsigned long q = sigma.get_den().get_ui();
  const Coefficient& c0 = a.leading_coefficient();
  if (q == 1) {
    if (branch && !(*branch == c0.pow(p))) throw BranchError("branch does not match c0^sigma for an integer power");
    return pow_int(a, p, cap);
  }
  if (!branch) throw BranchError("fractional power " + to_string(sigma) + " requires a branch root");
  if (!(branch->pow(static_cast<long>(q)) == c0.pow(p)))
    throw BranchError("branch^" + std::to_string(q) + " differs from c0^" + std::to_string(p));
  const Exponent mu0 = a.leading_exponent();
  Exponent shift = sigma * mu0;
  PuiseuxSeries r = relative_tail(a);
  Valuation prec = relative_precision(a, cap, shift);
  if (nothing_known(prec)) return PuiseuxSeries::big_o(Valuation(Rational(prec.value() + shift)));
  if (r.is_exact_zero()) return PuiseuxSeries::monomial(*branch, shift);
  PowerCoefficients table = power_coefficients(r, sigma, prec);
  PuiseuxSeries unit(table.composite, min(prec, r.trunc()));
  return unit.scaled(*branch).shifted(shift);
}

Coefficient BranchChoice::power(const Exponent& sigma) const {
  Rational k = sigma * s;
  if (!is_integer(k)) throw BranchError("branch root does not resolve power " + to_string(sigma));
  return root.pow(k.get_num().get_si());
}

PuiseuxSeries substitute_series(std::span<const Monomial> rhs, const PuiseuxSeries& y, const Valuation& cap,
                                const std::optional<BranchChoice>& branch) {
  PuiseuxSeries sum;
  for (const auto& m : rhs) {
    Valuation local_cap = cap - m.nu;
    PuiseuxSeries power;
    if (m.sigma == 0) {
      power = PuiseuxSeries::constant(Coefficient(1));
    } else if (y.empty()) {
      if (m.sigma < 0) throw PoleError("y^" + to_string(m.sigma) + " evaluated at y = 0");
      power = y.is_exact() ? PuiseuxSeries() : PuiseuxSeries::big_o(Valuation(Rational(y.trunc().value() * m.sigma)));
    } else if (is_integer(m.sigma)) {
      power = pow_int(y, m.sigma.get_num().get_si(), local_cap);
    } else {
      std::optional<Coefficient> b;
      if (branch) {
        b = branch->power(m.sigma);
      } else {
        const Coefficient& c0 = y.leading_coefficient();
        if (!c0.is_constant()) throw BranchError("fractional power of a symbolic leading coefficient");
        auto root = exact_root(pow(c0.constant(), m.sigma.get_num().get_si()), m.sigma.get_den().get_ui());
        if (!root) throw BranchError("no rational branch for y^" + to_string(m.sigma));
        b = Coefficient(*root);
      }
      power = pow_rational(y, m.sigma, b, local_cap);
    }
    sum = sum + power.scaled(Coefficient(m.f)).shifted(m.nu).truncated(cap);
  }
  return sum.truncated(cap);
}

}  // namespace puiseux
