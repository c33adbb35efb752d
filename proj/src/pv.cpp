#include "puiseux/pv.hpp"

#include <algorithm>
#include <sstream>

namespace puiseux {

namespace {

RationalFunction x_power(const Rational& e) {
  if (!is_integer(e)) throw std::invalid_argument("fractional power of x " + puiseux::to_string(e) + " is outside Q(x)");
  return RationalFunction::variable().pow(e.get_num().get_si());
}

RationalFunction series_to_field(const PuiseuxSeries& s) {
  if (!s.is_exact()) throw std::invalid_argument("truncated coefficient " + s.to_string() + " is outside Q(x)");
  RationalFunction r;
  for (const auto& [e, c] : s.terms()) {
    if (!c.is_constant()) throw std::invalid_argument("symbolic coefficient is outside Q(x)");
    r += RationalFunction(c.constant()) * x_power(e);
  }
  return r;
}

YPolynomial trim(YPolynomial p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

void add_at(YPolynomial& p, std::size_t i, const RationalFunction& c) {
  if (p.size() <= i) p.resize(i + 1);
  p[i] += c;
}

using EPoly = std::vector<Expr>;

EPoly emul(const EPoly& a, const EPoly& b) {
  if (a.empty() || b.empty()) return {};
  EPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

EPoly eadd(const EPoly& a, const EPoly& b) {
  EPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

EPoly escale(const EPoly& a, const Expr& c) {
  EPoly r;
  for (const auto& v : a) r.push_back(v * c);
  return r;
}

EPoly lift(const YPolynomial& p) { return EPoly(p.begin(), p.end()); }

std::string exponent_text(long e) {
  if (e == 0) return "";
  if (e == 1) return "y";
  if (e > 0) return "y^" + std::to_string(e);
  return "y^(" + std::to_string(e) + ")";
}

}  // namespace

FieldODE FieldODE::from(const MonomialODE& e) {
  long shift = 0;
  for (const auto& m : e.monomials) {
    if (!is_integer(m.sigma)) throw std::invalid_argument("fractional power of y is outside Q(x)[y]");
    shift = std::max(shift, -m.sigma.get_num().get_si());
  }
  FieldODE r;
  for (const auto& m : e.monomials)
    add_at(r.p, static_cast<std::size_t>(m.sigma.get_num().get_si() + shift), RationalFunction(m.f) * x_power(m.nu));
  add_at(r.q, static_cast<std::size_t>(shift), RationalFunction(1));
  r.p = trim(std::move(r.p));
  return r;
}

FieldODE FieldODE::from(const RationalODE& e) {
  FieldODE r;
  for (const auto& c : e.p) r.p.push_back(series_to_field(c));
  for (const auto& c : e.q) r.q.push_back(series_to_field(c));
  r.p = trim(std::move(r.p));
  r.q = trim(std::move(r.q));
  if (r.q.empty()) throw std::invalid_argument("Q is zero");
  return r;
}

YPolynomial closedness_defect(const FieldODE& e) {
  YPolynomial r;
  for (std::size_t i = 1; i < e.p.size(); ++i) add_at(r, i - 1, e.p[i] * RationalFunction(static_cast<long>(i)));
  for (std::size_t j = 0; j < e.q.size(); ++j) add_at(r, j, e.q[j].derivative());
  return trim(std::move(r));
}

IntegratingFactorEquation integrating_factor_equation(const FieldODE& e) {
  if (trim(e.q).empty()) throw std::invalid_argument("Q is zero");
  YPolynomial num = closedness_defect(e);
  for (auto& c : num) c = -c;
  return {num, trim(e.q)};
}

std::optional<YPolynomial> IntegratingFactorEquation::polynomial() const {
  YPolynomial rem = numerator;
  std::size_t dq = denominator.size() - 1;
  if (rem.size() <= dq) {
    if (trim(rem).empty()) return YPolynomial{};
    return std::nullopt;
  }
  YPolynomial quot(rem.size() - dq);
  RationalFunction lc = denominator.back().inverse();
  for (std::size_t i = rem.size(); i-- > dq;) {
    RationalFunction c = rem[i] * lc;
    quot[i - dq] = c;
    for (std::size_t j = 0; j <= dq; ++j) rem[i - dq + j] -= c * denominator[j];
  }
  if (!trim(rem).empty()) return std::nullopt;
  return trim(std::move(quot));
}

std::string to_string(FactorCase c) { return c == FactorCase::A ? "A" : "B"; }

FactorCase factor_case(long mu_p, long mu_q) { return mu_q + 1 <= mu_p ? FactorCase::A : FactorCase::B; }

IntegralFactorProblem IntegralFactorProblem::make(long mu_p, std::vector<RationalFunction> p, long mu_q,
                                                  std::vector<RationalFunction> q) {
  auto strip = [](long& mu, std::vector<RationalFunction>& v, const char* name) {
    std::size_t lead = 0;
    while (lead < v.size() && v[lead].is_zero()) ++lead;
    if (lead == v.size()) throw std::invalid_argument(std::string(name) + " is zero");
    v.erase(v.begin(), v.begin() + static_cast<long>(lead));
    mu += static_cast<long>(lead);
    v = trim(std::move(v));
  };
  strip(mu_p, p, "P");
  strip(mu_q, q, "Q");
  RationalFunction inv = q[0].inverse();
  for (auto& c : p) c *= inv;
  for (auto& c : q) c *= inv;
  return {mu_p, mu_q, std::move(p), std::move(q)};
}

IntegralFactorProblem IntegralFactorProblem::from(const FieldODE& e) { return make(0, e.p, 0, e.q); }

RationalFunction IntegralFactorProblem::p_at(long i) const {
  return i >= 0 && i < static_cast<long>(p.size()) ? p[static_cast<std::size_t>(i)] : RationalFunction();
}

RationalFunction IntegralFactorProblem::q_at(long j) const {
  return j >= 0 && j < static_cast<long>(q.size()) ? q[static_cast<std::size_t>(j)] : RationalFunction();
}

bool IntegralFactorSeries::verified() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.second == ZeroTest::zero; });
}

std::string IntegralFactorSeries::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k].is_zero()) continue;
    std::string c;
    auto r = w[k].as_rational();
    c = r ? r->to_string("x") : w[k].to_string();
    std::string y = exponent_text(mu0 + static_cast<long>(k));
    std::string term;
    if (y.empty()) term = c;
    else if (r && *r == RationalFunction(1)) term = y;
    else if (r && *r == RationalFunction(-1)) term = "-" + y;
    else term = (c.find(' ') != std::string::npos ? "(" + c + ")" : c) + "*" + y;
    if (out.empty()) out = term;
    else if (term.front() == '-') out += " - " + term.substr(1);
    else out += " + " + term;
  }
  return out.empty() ? "0" : out;
}

Expr level_identity(const IntegralFactorProblem& pr, long mu0, const std::vector<Expr>& w, long level) {
  Expr s;
  for (long k = 0; k < static_cast<long>(w.size()); ++k) {
    RationalFunction q = pr.q_at(level - k);
    if (!q.is_zero()) s += Expr(q) * w[static_cast<std::size_t>(k)].derivative();
    RationalFunction p = pr.p_at(level - pr.delta() - k);
    if (!p.is_zero()) s += Expr(p * RationalFunction(mu0 + k)) * w[static_cast<std::size_t>(k)];
  }
  return s;
}

IntegralFactorSeries solve_w(const IntegralFactorProblem& pr, long mu0, long levels) {
  if (pr.p.empty() || pr.p[0].is_zero()) throw std::invalid_argument("p_0 must be nonzero");
  if (pr.q.empty() || !(pr.q[0] == RationalFunction(1))) throw std::invalid_argument("q_0 must be 1");
  if (levels < 1) throw std::invalid_argument("levels must be positive");
  IntegralFactorSeries out;
  out.mu0 = mu0;
  out.kind = pr.kind();
  std::vector<Expr>& w = out.w;
  std::vector<Expr> dw;
  auto push = [&](Expr e) {
    dw.push_back(e.derivative());
    w.push_back(std::move(e));
  };
  // -sum_{j>=1} q_j w'_{n-j}
  auto q_tail = [&](long n) {
    Expr s;
    for (long j = 1; j <= n; ++j) {
      RationalFunction q = pr.q_at(j);
      if (!q.is_zero()) s += Expr(-q) * dw[static_cast<std::size_t>(n - j)];
    }
    return s;
  };
  const long delta = pr.delta();
  if (out.kind == FactorCase::A) {
    if (mu0 == 0) throw std::invalid_argument("case A needs a nonzero mu0");
    if (delta > 0) {
      push(Expr(1));
      for (long n = 1; n < levels; ++n) {
        Expr rhs = q_tail(n);
        for (long k = 0; k <= n - delta; ++k) {
          RationalFunction p = pr.p_at(n - delta - k);
          if (!p.is_zero()) rhs += Expr(-(p * RationalFunction(mu0 + k))) * w[static_cast<std::size_t>(k)];
        }
        push(integrate(rhs));
      }
    } else {
      for (long n = 0; n < levels; ++n) {
        Expr a(pr.p[0] * RationalFunction(mu0 + n));
        Expr b = q_tail(n);
        for (long k = 0; k < n; ++k) {
          RationalFunction p = pr.p_at(n - k);
          if (!p.is_zero()) b += Expr(-(p * RationalFunction(mu0 + k))) * w[static_cast<std::size_t>(k)];
        }
        if (n == 0) push(exp_integrate(-a));
        else if (a.is_zero()) push(integrate(b));
        else if (b.is_zero()) push(Expr());
        else push(exp_integrate(-a) * integrate(b * exp_integrate(a)));
      }
    }
  } else {
    if (mu0 != 0) throw std::invalid_argument("case B needs mu0 = 0");
    const long gamma = pr.gamma();
    push(-integrate(Expr(pr.p[0])));
    for (long n = 1; n < levels; ++n) {
      Expr s;
      for (long j = 0; j <= n - gamma; ++j) {
        RationalFunction q = pr.q_at(j);
        if (!q.is_zero()) s += Expr(q) * dw[static_cast<std::size_t>(n - gamma - j)];
      }
      for (long i = 1; i <= n; ++i) {
        RationalFunction p = pr.p_at(i);
        if (!p.is_zero()) s += Expr(p * RationalFunction(n - i)) * w[static_cast<std::size_t>(n - i)];
      }
      push(-s / Expr(pr.p[0] * RationalFunction(n)));
    }
  }
  const long n = static_cast<long>(w.size());
  const long lo = std::min<long>(0, delta);
  const long hi = out.kind == FactorCase::A ? n - 1 : n - 1 + delta;
  for (long level = lo; level <= hi; ++level)
    out.checks.emplace_back(level, level_identity(pr, mu0, w, level).zero_test());
  if (!out.verified()) throw std::logic_error("integrating-factor level identity failed");
  return out;
}

ConstantCheck verify_constant(const FirstIntegralCandidate& cand, const FieldODE& e) {
  const std::size_t n = cand.roots.size();
  if (cand.k.size() != n) throw MalformedCandidate("roots and exponents differ in length");
  for (long k : cand.k)
    if (k == 0) throw MalformedCandidate("zero exponent");
  if (cand.alpha.is_zero()) throw MalformedCandidate("alpha is zero");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (equal(cand.roots[i], cand.roots[j]) == ZeroTest::zero) throw MalformedCandidate("repeated root");
  if (trim(e.q).empty()) throw MalformedCandidate("Q is zero");

  const EPoly P = lift(e.p), Q = lift(e.q);
  std::vector<EPoly> factors;
  for (const auto& r : cand.roots) factors.push_back({-r, Expr(1)});
  EPoly all{Expr(1)};
  for (const auto& f : factors) all = emul(all, f);

  ConstantCheck out;
  out.residual = emul(escale(Q, cand.alpha.derivative() / cand.alpha), all);
  for (std::size_t l = 0; l < n; ++l) {
    EPoly others{Expr(1)};
    for (std::size_t m = 0; m < n; ++m)
      if (m != l) others = emul(others, factors[m]);
    EPoly term = eadd(P, escale(Q, -cand.roots[l].derivative()));
    out.residual = eadd(out.residual, escale(emul(term, others), Expr(cand.k[l])));
  }
  out.verdict = ZeroTest::zero;
  for (const auto& c : out.residual) {
    ZeroTest z = c.zero_test();
    if (z == ZeroTest::nonzero) {
      out.verdict = z;
      break;
    }
    if (z == ZeroTest::inconclusive) out.verdict = z;
  }
  return out;
}

PuiseuxSeries to_series(const Expr& e, const Valuation& cap) {
  auto r = e.as_rational();
  if (!r) throw MalformedExpression("expression has tower nodes: " + e.to_string());
  auto poly_series = [](const UniPoly& p) {
    PuiseuxSeries::TermMap t;
    for (std::size_t i = 0; i < p.coeffs().size(); ++i)
      if (p.coeffs()[i] != 0) t[Rational(static_cast<long>(i))] = Coefficient(p.coeffs()[i]);
    return PuiseuxSeries(std::move(t), Valuation::infinity());
  };
  PuiseuxSeries num = poly_series(r->num());
  PuiseuxSeries den = poly_series(r->den());
  if (r->den().low_degree() == static_cast<std::size_t>(r->den().degree()))
    return (num * invert(den)).truncated(Valuation::infinity());
  Valuation inner = cap.is_finite() ? Valuation(Rational(cap.value() + Rational(static_cast<long>(r->den().low_degree()))))
                                    : cap;
  return (num * invert(den, inner)).truncated(cap);
}

std::size_t GhostSet::ghost_count() const {
  return static_cast<std::size_t>(std::count_if(roots.begin(), roots.end(), [](const GhostRoot& g) { return g.ghost; }));
}

GhostRoot classify_root(const MonomialODE& e, const PuiseuxSeries& y) {
  GhostRoot g;
  g.y = y;
  Valuation vy = y.order();
  Rational drop = -1;
  for (const auto& m : e.monomials)
    if (vy.is_finite()) drop = std::min(drop, Rational(m.nu + (m.sigma - 1) * vy.value()));
  g.threshold = y.trunc().is_infinite() ? Valuation::infinity() : Valuation(Rational(y.trunc().value() + drop));
  SolutionBranch sb;
  sb.series = y;
  g.check = verify_branch(e, sb);
  g.ghost = g.threshold.is_infinite() ? !g.check.exact() : g.check.value() < g.threshold;
  return g;
}

GhostSet ghost_roots(const std::vector<PuiseuxSeries>& roots, const std::vector<long>& k, const MonomialODE& e,
                     const Exponent& bound) {
  if (roots.size() < 2) throw MalformedCandidate("ghost roots need at least two solutions");
  if (k.size() != roots.size()) throw MalformedCandidate("roots and exponents differ in length");
  for (long v : k)
    if (v == 0) throw MalformedCandidate("zero exponent");
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if ((roots[i] - roots[j]).is_exact_zero()) throw MalformedCandidate("repeated root");

  using SPoly = std::vector<PuiseuxSeries>;
  auto smul = [](const SPoly& a, const SPoly& b) {
    SPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return r;
  };
  SPoly num(roots.size());
  for (std::size_t l = 0; l < roots.size(); ++l) {
    SPoly prod{PuiseuxSeries::constant(Coefficient(k[l]))};
    for (std::size_t m = 0; m < roots.size(); ++m)
      if (m != l) prod = smul(prod, {-roots[m], PuiseuxSeries::constant(Coefficient(1))});
    for (std::size_t i = 0; i < prod.size(); ++i) num[i] = num[i] + prod[i];
  }
  while (!num.empty() && num.back().empty()) num.pop_back();

  GhostSet out;
  if (num.size() < 2) {
    out.degenerate = true;
    return out;
  }
  AlgebraicSolution sol = solve_algebraic(SeriesPolynomial(num), bound);
  out.unresolved = sol.unresolved;
  for (const auto& b : sol.branches) {
    GhostRoot g = classify_root(e, b.series);
    g.multiplicity = b.multiplicity;
    out.roots.push_back(std::move(g));
  }
  return out;
}

GhostSet ghost_roots(const FirstIntegralCandidate& cand, const MonomialODE& e, const Exponent& bound) {
  std::vector<PuiseuxSeries> roots;
  for (const auto& r : cand.roots) roots.push_back(to_series(r, Valuation(Rational(bound + 2))));
  return ghost_roots(roots, cand.k, e, bound);
}

Expr riccati_residual(const Expr& a, const Expr& b, const Expr& y) { return y.derivative() - y * y - b * y - a; }

Expr linear_residual(const Expr& a, const Expr& b, const Expr& z) {
  Expr dz = z.derivative();
  return dz.derivative() - b * dz + a * z;
}

RiccatiReport riccati_bridge(const Expr& a, const Expr& b, const Expr& z) {
  if (z.is_zero()) throw MalformedExpression("z is zero");
  RiccatiReport r;
  r.y = -(z.derivative() / z);
  r.riccati_residual = riccati_residual(a, b, r.y);
  r.linear_residual = linear_residual(a, b, z);
  r.riccati = r.riccati_residual.zero_test();
  r.linear = r.linear_residual.zero_test();
  r.identity = (r.riccati_residual + r.linear_residual / z).zero_test();
  return r;
}

Expr riccati_member(const Expr& z1, const Expr& z2, const Rational& c) {
  return -((Expr(c) * z2.derivative() + z1.derivative()) / (Expr(c) * z2 + z1));
}

}  // namespace puiseux
