#include "puiseux/algebraic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace puiseux {

SeriesPolynomial::SeriesPolynomial(std::vector<PuiseuxSeries> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() < 2) throw std::invalid_argument("series polynomial needs degree >= 1");
  if (coeffs_.back().empty()) throw std::invalid_argument("leading coefficient must be nonzero");
}

PuiseuxSeries SeriesPolynomial::evaluate(const PuiseuxSeries& y) const {
  PuiseuxSeries acc = coeffs_.back();
  for (std::size_t i = coeffs_.size() - 1; i-- > 0;) acc = acc * y + coeffs_[i];
  return acc;
}

Rational Contour::at(const Rational& x) const {
  if (lines.empty()) throw std::logic_error("empty contour");
  Rational best = lines[0].intercept + lines[0].slope * x;
  for (const auto& l : lines) best = std::min<Rational>(best, l.intercept + l.slope * x);
  return best;
}

std::vector<std::size_t> Contour::active(const Rational& x) const {
  Rational v = at(x);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (lines[i].intercept + lines[i].slope * x == v) out.push_back(i);
  return out;
}

Contour contour(const SeriesPolynomial& p) {
  Contour c;
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) {
    const auto& a = p.coeff(i);
    if (a.empty()) continue;
    c.lines.push_back({a.leading_exponent(), Rational(static_cast<long>(i)), a.leading_coefficient(),
                       static_cast<int>(i)});
  }
  return c;
}

std::vector<BreakPoint> breaking_points(const Contour& c) {
  std::set<Rational> xs;
  const auto& L = c.lines;
  for (std::size_t i = 0; i < L.size(); ++i)
    for (std::size_t j = i + 1; j < L.size(); ++j) {
      if (L[i].slope == L[j].slope) continue;
      Rational x = (L[j].intercept - L[i].intercept) / (L[i].slope - L[j].slope);
      x.canonicalize();
      Rational v = c.at(x);
      if (L[i].intercept + L[i].slope * x == v && L[j].intercept + L[j].slope * x == v) xs.insert(x);
    }
  std::vector<BreakPoint> out;
  for (const auto& x : xs) {
    BreakPoint b{x, c.at(x), c.active(x), {}};
    for (auto idx : b.active) {
      auto& slot = b.vertex[L[idx].slope];
      slot += L[idx].lead;
    }
    for (auto it = b.vertex.begin(); it != b.vertex.end();)
      it = it->second.is_zero() ? b.vertex.erase(it) : std::next(it);
    out.push_back(std::move(b));
  }
  return out;
}

SeriesPolynomial recenter(const SeriesPolynomial& p, const PuiseuxSeries& y0) {
  // Taylor shift by repeated synthetic division.
  std::vector<PuiseuxSeries> b = p.coeffs();
  const std::size_t n = b.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n; j-- > i;) b[j] = b[j] + y0 * b[j + 1];
  return SeriesPolynomial(std::move(b));
}

std::optional<UniPoly> vertex_polynomial(const BreakPoint& b) {
  if (b.vertex.empty()) return UniPoly();
  Rational lo = b.vertex.begin()->first;
  std::vector<Rational> coeffs;
  for (const auto& [slope, lead] : b.vertex) {
    if (!lead.is_constant() || !is_integer(slope)) return std::nullopt;
    Rational d = slope - lo;
    std::size_t idx = d.get_num().get_ui();
    if (coeffs.size() <= idx) coeffs.resize(idx + 1);
    coeffs[idx] = lead.constant();
  }
  return UniPoly(std::move(coeffs));
}

int AlgebraicSolution::root_count() const {
  int n = 0;
  for (const auto& b : branches) n += b.multiplicity;
  for (const auto& u : unresolved) n += u.count;
  return n;
}

namespace {

struct Solver {
  const SeriesPolynomial& p;
  Exponent bound;
  AlgebraicSolution out;

  // The residual guarantee is measured on the emitted prefix itself.
  void emit(const PuiseuxSeries& prefix, const Valuation& trunc, int mult, const std::vector<Exponent>& killed) {
    auto y = prefix.truncated(min(prefix.trunc(), trunc));
    auto r = p.evaluate(PuiseuxSeries(y.terms(), Valuation::infinity()));
    out.branches.push_back({y, mult, r.order(), killed});
  }

  // Roots y = prefix + ybar of the original equation with v(ybar) > last, where
  // beta are the coefficients of the equation recentered at prefix.
  void stage(const std::vector<PuiseuxSeries>& beta, const PuiseuxSeries& prefix, const std::optional<Exponent>& last,
             int m, std::vector<Exponent> killed) {
    if (m <= 0) return;
    const auto& b0 = beta[0];
    if (b0.is_exact_zero()) {
      std::size_t k = 1;
      while (beta[k].is_exact_zero()) ++k;
      int z = std::min<int>(static_cast<int>(k), m);
      emit(prefix, Valuation::infinity(), z, killed);
      if (m > z) {
        std::vector<PuiseuxSeries> rest(beta.begin() + static_cast<long>(k), beta.end());
        if (rest.size() >= 2) stage(rest, prefix, last, m - z, killed);
      }
      return;
    }

    Contour c;
    std::vector<std::pair<Exponent, Valuation>> hidden;  // (index, trunc) of coefficients known only as O(.)
    for (std::size_t i = 0; i < beta.size(); ++i) {
      const auto& a = beta[i];
      if (a.empty()) {
        if (!a.is_exact()) hidden.emplace_back(Rational(static_cast<long>(i)), a.trunc());
        continue;
      }
      c.lines.push_back({a.leading_exponent(), Rational(static_cast<long>(i)), a.leading_coefficient(),
                         static_cast<int>(i)});
    }
    std::vector<BreakPoint> bps;
    if (c.lines.size() >= 2)
      for (auto& b : breaking_points(c))
        if (!last || b.x > *last) bps.push_back(std::move(b));

    Valuation sigma = b0.order();
    Valuation next = bps.empty() ? Valuation::infinity() : Valuation(bps.front().x);

    if (b0.empty()) {
      // beta_0 is only known to be O(x^T). A root ybar then either sits at a
      // breaking point of the lines i >= 1 or makes all of them reach T.
      const Rational T = b0.trunc().value();
      Contour upper;
      Valuation reach = Rational(0);
      bool any = false;
      for (const auto& l : c.lines)
        if (l.slope > 0) {
          upper.lines.push_back(l);
          Rational r = (T - l.intercept) / l.slope;
          reach = any ? max(reach, Valuation(r)) : Valuation(r);
          any = true;
        }
      for (const auto& [i, t] : hidden)
        if (i > 0) upper.lines.push_back({t.value(), i, Coefficient(1), -1});
      Valuation t = any ? reach : Valuation::infinity();
      if (upper.lines.size() >= 2)
        for (const auto& b : breaking_points(upper))
          if (!last || b.x > *last) t = min(t, Valuation(b.x));
      if (last && t <= Valuation(*last)) t = Valuation(*last);
      emit(prefix, t, m, killed);
      return;
    }
    if (sigma >= Valuation(bound) && next >= Valuation(bound)) {
      emit(prefix, next, m, killed);
      return;
    }

    for (const auto& b : bps) {
      long lo = b.vertex.begin()->first.get_num().get_si();
      long hi = b.vertex.rbegin()->first.get_num().get_si();
      int count = static_cast<int>(hi - lo);
      bool blocked = false;
      for (const auto& [i, t] : hidden)
        if (t.value() + i * b.x <= b.value) blocked = true;
      if (blocked) {
        emit(prefix, Valuation(b.x), count, killed);
        continue;
      }
      auto vp = vertex_polynomial(b);
      if (!vp) {
        UnresolvedBranch u{prefix, b.x, UniPoly(), count, true};
        out.unresolved.push_back(std::move(u));
        continue;
      }
      auto split = rational_roots(*vp);
      for (const auto& [root, mult] : split.roots) {
        auto term = PuiseuxSeries::monomial(Coefficient(root), b.x);
        auto shifted = recenter(SeriesPolynomial(beta), term);
        auto k = killed;
        k.push_back(b.value);
        stage(shifted.coeffs(), prefix + term, b.x, mult, std::move(k));
      }
      if (split.remainder.degree() > 0)
        out.unresolved.push_back({prefix, b.x, split.remainder, static_cast<int>(split.remainder.degree()), false});
    }
  }
};

}  // namespace

AlgebraicSolution solve_algebraic(const SeriesPolynomial& p, const Exponent& bound) {
  Solver s{p, bound, {}};
  s.stage(p.coeffs(), PuiseuxSeries(), std::nullopt, static_cast<int>(p.degree()), {});
  return std::move(s.out);
}

ClosedFormInput ClosedFormInput::from_polynomial(const SeriesPolynomial& p, const Coefficient& branch) {
  const std::size_t n = p.degree();
  const auto& lead = p.coeff(n);
  if (!lead.is_exact() || lead.size() != 1 || lead.leading_exponent() != 0)
    throw std::invalid_argument("closed form needs a monic equation");
  ClosedFormInput in;
  in.branch = branch;
  Coefficient inv = lead.leading_coefficient().inverse();
  std::optional<std::size_t> k;
  for (std::size_t i = 0; i <= n; ++i) {
    auto a = p.coeff(n - i).scaled(inv);
    if (i > 0 && !a.empty() && a.leading_exponent() < 0) {
      if (k) throw std::invalid_argument("closed form needs a single coefficient of negative valuation");
      k = i;
    }
    in.a.push_back(std::move(a));
  }
  if (!k) throw std::invalid_argument("closed form needs a coefficient of negative valuation");
  in.k = *k;
  return in;
}

PuiseuxSeries closed_form_root(const ClosedFormInput& c, std::size_t n_terms) {
  const std::size_t n = c.a.size() - 1;
  const std::size_t k = c.k;
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("closed form: bad degree or index");
  if (c.a[0] != PuiseuxSeries::constant(Coefficient(1))) throw std::invalid_argument("closed form: a_0 must be 1");
  const auto& ak = c.a[k];
  if (ak.empty() || ak.leading_exponent() >= 0) throw std::invalid_argument("closed form: v(a_k) must be negative");
  for (std::size_t i = 1; i <= n; ++i)
    if (i != k && !c.a[i].empty() && c.a[i].leading_exponent() < 0)
      throw std::invalid_argument("closed form: v(a_i) must be >= 0 for i != k");

  const Rational w = -ak.leading_exponent() / Rational(static_cast<long>(k));
  const Valuation cap(w * Rational(static_cast<long>(n_terms)));
  const auto u = pow_rational(-ak, Rational(1, static_cast<long>(k)), c.branch, cap);
  const auto u_inv = invert(u, cap);

  // e[p][m]: sum over compositions of m into p parts in 1..n, none equal to k.
  const std::size_t top = n_terms;
  std::vector<std::vector<PuiseuxSeries>> e(top + 1, std::vector<PuiseuxSeries>(top + 1));
  e[0][0] = PuiseuxSeries::constant(Coefficient(1));
  for (std::size_t p = 1; p <= top; ++p)
    for (std::size_t m = p; m <= top; ++m) {
      PuiseuxSeries acc;
      for (std::size_t j = 1; j <= std::min(n, m); ++j) {
        if (j == k || e[p - 1][m - j].is_exact_zero() || c.a[j].is_exact_zero()) continue;
        acc = acc + (c.a[j] * e[p - 1][m - j]).truncated(cap);
      }
      e[p][m] = acc;
    }

  PuiseuxSeries y = u;
  PuiseuxSeries u_pow = PuiseuxSeries::constant(Coefficient(1));
  const Rational kk(static_cast<long>(k));
  for (std::size_t i = 0; i < n_terms; ++i) {
    PuiseuxSeries ci;
    Rational fact(1), kp(1), prod(1);
    for (std::size_t p = 1; p <= i + 1; ++p) {
      fact *= Rational(static_cast<long>(p));
      kp *= kk;
      if (p >= 2) prod *= Rational(static_cast<long>(i)) - Rational(static_cast<long>(p - 1)) * kk;
      if (prod == 0) break;
      if (e[p][i + 1].is_exact_zero()) continue;
      ci = ci + e[p][i + 1].scaled(Coefficient(prod / (fact * kp)));
    }
    if (!ci.is_exact_zero()) y = y - (ci * u_pow).truncated(cap);
    u_pow = (u_pow * u_inv).truncated(cap);
  }
  return y.truncated(min(y.trunc(), cap));
}

}  // namespace puiseux
