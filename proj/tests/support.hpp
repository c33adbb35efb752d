#pragma once

#include <random>

#include "doctest.h"

#include "puiseux/algebraic.hpp"
#include "puiseux/series.hpp"

namespace doctest {
template <>
struct StringMaker<puiseux::Valuation> {
  static String convert(const puiseux::Valuation& v) { return v.to_string().c_str(); }
};
}  // namespace doctest

namespace puiseux::testing {

inline PuiseuxSeries S(std::string_view text) { return parse_series(text); }
inline Rational Q(long p, long q = 1) { return make_rational(p, q); }

/// Small random series: up to `max_terms` terms, exponents k/d with
/// d in {1,2,3}, small rational coefficients, optional finite truncation.
class SeriesGen {
 public:
  explicit SeriesGen(std::uint64_t seed) : rng_(seed) {}

  long uniform(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational coefficient() {
    long num = 0;
    while (num == 0) num = uniform(-5, 5);
    return make_rational(num, uniform(1, 3));
  }

  Rational exponent(long lo, long hi) { return make_rational(uniform(lo * 6, hi * 6), 6); }

  PuiseuxSeries series(int max_terms = 6, bool allow_trunc = true, long lo = -2, long hi = 4) {
    PuiseuxSeries::TermMap terms;
    int n = static_cast<int>(uniform(1, max_terms));
    for (int i = 0; i < n; ++i) terms[exponent(lo, hi)] = Coefficient(coefficient());
    Valuation trunc = Valuation::infinity();
    if (allow_trunc && uniform(0, 2) == 0) trunc = Valuation(Rational(terms.rbegin()->first + make_rational(uniform(1, 6), 2)));
    return PuiseuxSeries(std::move(terms), trunc);
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Binomial-series oracle for (1 + r)^sigma, built only from multiplication:
/// sum_k binom(sigma, k) r^k, cut at `precision`.
inline PuiseuxSeries binomial_oracle(const PuiseuxSeries& r, const Rational& sigma, const Rational& precision) {
  PuiseuxSeries sum = PuiseuxSeries::constant(Coefficient(1)).truncated(Valuation(precision));
  PuiseuxSeries power = sum;
  Rational binom = 1;
  for (long k = 1;; ++k) {
    power = (power * r).truncated(Valuation(precision));
    if (power.empty()) break;
    binom = binom * (sigma - (k - 1)) / k;
    sum = sum + power.scaled(Coefficient(binom));
  }
  return sum;
}


/// Degree-N polynomial whose coefficients are the first few terms of
/// prod (y - a_j x^{m_j}) for distinct leading pairs (a_j, m_j), plus one
/// random higher-order term each. Leading data comes from the product, so every
/// vertex polynomial splits over Q; distinct pairs keep later stages linear.
inline SeriesPolynomial random_split_polynomial(SeriesGen& g, std::size_t degree, std::size_t max_terms = 3) {
  std::vector<std::pair<Rational, Rational>> roots;
  while (roots.size() < degree) {
    std::pair<Rational, Rational> r{g.coefficient(), make_rational(g.uniform(-6, 6), g.uniform(1, 3))};
    bool fresh = true;
    for (const auto& q : roots) fresh = fresh && q != r;
    if (fresh) roots.push_back(r);
  }
  std::vector<PuiseuxSeries> prod{PuiseuxSeries::constant(Coefficient(1))};
  for (const auto& [a, m] : roots) {
    std::vector<PuiseuxSeries> next(prod.size() + 1);
    auto root = PuiseuxSeries::monomial(Coefficient(a), m);
    for (std::size_t i = 0; i < prod.size(); ++i) {
      next[i + 1] = next[i + 1] + prod[i];
      next[i] = next[i] - root * prod[i];
    }
    prod = std::move(next);
  }
  for (auto& c : prod) {
    if (c.empty()) continue;
    PuiseuxSeries::TermMap t;
    for (const auto& [e, v] : c.terms()) {
      if (t.size() + 1 >= max_terms) break;
      t.emplace(e, v);
    }
    if (c.size() > t.size()) {
      Exponent last = t.rbegin()->first;
      t.emplace(last + make_rational(g.uniform(1, 12), g.uniform(1, 3)), Coefficient(g.coefficient()));
    }
    c = PuiseuxSeries(std::move(t), Valuation::infinity());
  }
  return SeriesPolynomial(std::move(prod));
}

}  // namespace puiseux::testing
