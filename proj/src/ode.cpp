#include "puiseux/ode.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace puiseux {

std::optional<Valuation> ExpansionRecord::cap(const Exponent& mu) const {
  Valuation out = Valuation::infinity();
  if (x_cap.is_finite()) out = Valuation(Rational(x_cap.value() + Rational(y_order) * std::min<Rational>(mu, Rational(0))));
  if (!y_exact) {
    Rational slope = rho + mu;
    if (slope <= 0) return std::nullopt;
    out = min(out, Valuation(Rational(offset + Rational(y_order + 1) * slope)));
  }
  return out;
}

MonomialODE::MonomialODE(std::vector<Monomial> m) {
  std::map<std::pair<Exponent, Exponent>, Rational> merged;  // (sigma, nu) -> f
  for (const auto& x : m) merged[{x.sigma, x.nu}] += x.f;
  for (const auto& [key, f] : merged)
    if (f != 0) monomials.push_back({key.second, key.first, f});
}

long MonomialODE::ramification() const {
  long s = 1;
  for (const auto& m : monomials) s = std::lcm(s, m.sigma.get_den().get_si());
  return s;
}

Exponent MonomialODE::min_nu() const {
  if (monomials.empty()) throw std::logic_error("empty right-hand side");
  Exponent v = monomials[0].nu;
  for (const auto& m : monomials) v = std::min<Rational>(v, m.nu);
  return v;
}

std::string to_string(InitialCase c) {
  switch (c) {
    case InitialCase::a: return "a";
    case InitialCase::b: return "b";
    case InitialCase::c: return "c";
  }
  return "?";
}

std::string to_string(BranchKind k) {
  switch (k) {
    case BranchKind::proper: return "proper";
    case BranchKind::algebraic_type: return "algebraic-type";
    case BranchKind::no_continuation: return "no-continuation";
  }
  return "?";
}

std::string to_string(BranchStatus s) {
  switch (s) {
    case BranchStatus::unique: return "Unique";
    case BranchStatus::resonant_free: return "ResonantFree";
    case BranchStatus::negative_resonance: return "NegativeResonance";
    case BranchStatus::algebraic_type: return "AlgebraicType";
    case BranchStatus::no_continuation: return "NoContinuation";
  }
  return "?";
}

Contour ode_contour(const MonomialODE& e) {
  Contour c;
  for (std::size_t i = 0; i < e.monomials.size(); ++i) {
    const auto& m = e.monomials[i];
    c.lines.push_back({m.nu, m.sigma, Coefficient(m.f), static_cast<int>(i)});
  }
  c.lines.push_back({Rational(-1), Rational(1), Coefficient(0), -1});
  return c;
}

namespace {

Coefficient branch_power(const Rational& t, long s, const Exponent& sigma) {
  Rational k = sigma * s;
  return Coefficient(pow(t, k.get_num().get_si()));
}

// sum over terms of f t^{s*sigma} (+ extra t^s) as a polynomial in t, shifted
// so the lowest power is t^0.
UniPoly vertex_in_t(const std::vector<Monomial>& terms, long s, const Rational& extra) {
  std::map<long, Rational> by_power;
  for (const auto& m : terms) by_power[Rational(m.sigma * s).get_num().get_si()] += m.f;
  if (extra != 0) by_power[s] += extra;
  for (auto it = by_power.begin(); it != by_power.end();) it = it->second == 0 ? by_power.erase(it) : std::next(it);
  if (by_power.empty()) return UniPoly();
  long lo = by_power.begin()->first;
  std::vector<Rational> c(static_cast<std::size_t>(by_power.rbegin()->first - lo + 1));
  for (const auto& [k, v] : by_power) c[static_cast<std::size_t>(k - lo)] = v;
  return UniPoly(std::move(c));
}

std::vector<Monomial> active_monomials(const MonomialODE& e, const Contour& c, const Rational& x, bool& derivative) {
  std::vector<Monomial> out;
  derivative = false;
  for (auto idx : c.active(x)) {
    int tag = c.lines[idx].tag;
    if (tag < 0)
      derivative = true;
    else
      out.push_back(e.monomials[static_cast<std::size_t>(tag)]);
  }
  return out;
}

Exponent resonant_index(const std::vector<Monomial>& active, const Rational& t, long s) {
  Coefficient sum;
  for (const auto& m : active) sum += Coefficient(m.f * m.sigma) * branch_power(t, s, m.sigma - 1);
  return sum.constant();
}

std::optional<BranchChoice> choice(const Rational& t, long s) {
  if (s == 1) return std::nullopt;
  return BranchChoice{Coefficient(t), s};
}

std::vector<Monomial> lowest_nu_terms(const MonomialODE& e) {
  std::vector<Monomial> out;
  Exponent lo = e.min_nu();
  for (const auto& m : e.monomials)
    if (m.nu == lo) out.push_back(m);
  return out;
}

}  // namespace

InitialTerms initial_terms(const MonomialODE& e) {
  InitialTerms out;
  if (e.monomials.empty()) return out;
  const long s = e.ramification();
  const Contour c = ode_contour(e);

  for (const auto& b : breaking_points(c)) {
    if (b.x == 0) continue;
    bool derivative = false;
    auto active = active_monomials(e, c, b.x, derivative);
    auto vp = vertex_in_t(active, s, derivative ? Rational(-b.x) : Rational(0));
    if (vp.degree() < 1) continue;
    auto split = rational_roots(vp);
    for (const auto& [t, mult] : split.roots) {
      InitialTerm term;
      term.mu0 = b.x;
      term.c0 = branch_power(t, s, Rational(1));
      term.kind = InitialCase::b;
      term.mu_r = resonant_index(active, t, s);
      term.branch = choice(t, s);
      out.terms.push_back(std::move(term));
    }
    if (split.remainder.degree() > 0)
      out.unresolved.push_back({b.x, s, split.remainder, "vertex polynomial without rational roots"});
  }

  for (const auto& m : e.monomials) {
    if (m.nu != -1 || m.sigma != 1) continue;
    const Rational mu0 = m.f;
    if (c.at(mu0) != mu0 - 1) continue;
    bool on_break = false;
    for (auto idx : c.active(mu0))
      if (c.lines[idx].slope != 1) on_break = true;
    if (on_break) continue;
    out.terms.push_back({mu0, std::nullopt, InitialCase::c, mu0, std::nullopt, false});
  }

  const Exponent nu0 = e.min_nu();
  if (nu0 + 1 > 0) {
    out.terms.push_back({Rational(0), std::nullopt, InitialCase::a, std::nullopt, std::nullopt, false});
  } else {
    auto low = lowest_nu_terms(e);
    auto vp = vertex_in_t(low, s, Rational(0));
    if (vp.degree() >= 1) {
      auto split = rational_roots(vp);
      for (const auto& [t, mult] : split.roots) {
        InitialTerm term{Rational(0), branch_power(t, s, Rational(1)), InitialCase::a, std::nullopt, choice(t, s),
                         nu0 + 1 == 0};
        if (term.boundary) term.mu_r = resonant_index(low, t, s);
        out.terms.push_back(std::move(term));
      }
      if (split.remainder.degree() > 0)
        out.unresolved.push_back({Rational(0), s, split.remainder, "vertex polynomial without rational roots"});
    }
  }

  std::stable_sort(out.terms.begin(), out.terms.end(),
                   [](const InitialTerm& x, const InitialTerm& y) { return x.mu0 < y.mu0; });
  return out;
}

BranchKind classify(const MonomialODE& e, const InitialTerm& t) {
  const Contour c = ode_contour(e);
  switch (t.kind) {
    case InitialCase::c:
      return BranchKind::proper;
    case InitialCase::b:
      return c.at(t.mu0) == t.mu0 - 1 ? BranchKind::proper : BranchKind::algebraic_type;
    case InitialCase::a: {
      const Exponent nu0 = e.min_nu();
      if (nu0 + 1 > 0) return BranchKind::proper;
      if (nu0 + 1 == 0 || !t.c0) return BranchKind::no_continuation;
      auto low = lowest_nu_terms(e);
      std::set<Exponent> sigmas;
      Coefficient sum;
      for (const auto& m : low) {
        sigmas.insert(m.sigma);
        Coefficient p = t.branch ? t.branch->power(m.sigma) : t.c0->pow(m.sigma.get_num().get_si());
        sum += Coefficient(m.f) * p;
      }
      if (sigmas.size() < 2 || !sum.is_zero()) return BranchKind::no_continuation;
      return BranchKind::algebraic_type;
    }
  }
  return BranchKind::no_continuation;
}

namespace {

// Integer view of rational lattice data over a common denominator.
struct Scaled {
  mpz_class den = 1;
  long of(const Rational& r) const {
    Rational v = r * Rational(den);
    return v.get_num().get_si();
  }
};

Scaled common_scale(const std::vector<Exponent>& xs) {
  Scaled sc;
  for (const auto& x : xs) mpz_lcm(sc.den.get_mpz_t(), sc.den.get_mpz_t(), x.get_den_mpz_t());
  return sc;
}

bool representable(long target, const std::vector<long>& gens) {
  if (target < 0) return false;
  std::vector<char> ok(static_cast<std::size_t>(target) + 1, 0);
  ok[0] = 1;
  for (long v = 1; v <= target; ++v)
    for (long g : gens)
      if (g <= v && ok[static_cast<std::size_t>(v - g)]) {
        ok[static_cast<std::size_t>(v)] = 1;
        break;
      }
  return ok[static_cast<std::size_t>(target)];
}

std::vector<Exponent> enumerate(const Exponent& offset, const std::vector<Exponent>& gens, const Valuation& bound) {
  std::set<Exponent> seen{offset};
  std::vector<Exponent> frontier{offset};
  if (bound.is_infinite() && !gens.empty()) throw std::invalid_argument("lattice enumeration needs a finite bound");
  while (!frontier.empty()) {
    std::vector<Exponent> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        Rational y = x + g;
        if (Valuation(y) > bound || seen.count(y)) continue;
        seen.insert(y);
        next.push_back(y);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

bool IndexLattice::contains(const Exponent& e) const {
  if (Valuation(e) <= bound) return std::binary_search(elements.begin(), elements.end(), e);
  std::vector<Exponent> all = generators;
  all.push_back(e - offset);
  auto sc = common_scale(all);
  std::vector<long> g;
  for (const auto& x : generators) g.push_back(sc.of(x));
  return representable(sc.of(e - offset), g);
}

IndexLattice IndexLattice::widened(const Exponent& shift) const {
  IndexLattice out = *this;
  if (shift > 0 && std::find(out.generators.begin(), out.generators.end(), shift) == out.generators.end()) {
    out.generators.push_back(shift);
    std::sort(out.generators.begin(), out.generators.end());
  }
  out.elements = enumerate(out.offset, out.generators, out.bound);
  return out;
}

std::vector<Exponent> IndexLattice::non_decomposable() const {
  auto sc = common_scale(generators);
  std::vector<Exponent> out;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    std::vector<long> smaller;
    for (std::size_t j = 0; j < i; ++j) smaller.push_back(sc.of(generators[j]));
    if (!representable(sc.of(generators[i]), smaller)) out.push_back(generators[i]);
  }
  return out;
}

std::vector<Exponent> IndexLattice::non_decomposable_for(const Exponent& target) const {
  const Exponent delta = target - offset;
  std::vector<Exponent> all = generators;
  all.push_back(delta);
  auto sc = common_scale(all);
  std::vector<long> g;
  for (const auto& x : generators) g.push_back(sc.of(x));
  std::vector<Exponent> out;
  for (const auto& b : non_decomposable())
    if (b <= delta && representable(sc.of(delta - b), g)) out.push_back(b);
  return out;
}

IndexLattice index_lattice(const MonomialODE& e, const InitialTerm& t, const Exponent& bound) {
  IndexLattice l;
  l.offset = t.mu0;
  l.bound = Valuation(bound);
  std::set<Exponent> gens;
  for (const auto& m : e.monomials) {
    Rational g = m.nu + 1 + t.mu0 * (m.sigma - 1);
    if (g < 0)
      throw ClassificationError("negative lattice generator " + to_string(g) +
                                "; the term starts an algebraic-type solution");
    if (g > 0) gens.insert(g);
  }
  l.generators.assign(gens.begin(), gens.end());
  l.elements = enumerate(l.offset, l.generators, l.bound);
  return l;
}

SolutionBranch continue_proper(const MonomialODE& e, const InitialTerm& t, const Exponent& bound,
                               const std::optional<Coefficient>& value) {
  if (classify(e, t) != BranchKind::proper) throw ClassificationError("continue_proper needs a proper initial term");
  SolutionBranch b;
  b.initial = t;
  b.kind = BranchKind::proper;
  const Coefficient free = value ? *value : Coefficient::variable();
  Coefficient c0 = t.c0 ? *t.c0 : free;
  std::optional<BranchChoice> branch = t.branch;
  const long s = e.ramification();
  if (!t.c0) {
    b.free_value = free;
    if (s > 1) {
      // A free leading coefficient under fractional powers is parametrized as
      // c0 = C^s; a numeric value needs a rational s-th root.
      if (value) {
        if (!value->is_constant()) throw BranchError("free value must be rational");
        auto root = exact_root(value->constant(), static_cast<unsigned long>(s));
        if (!root) throw BranchError("free value " + to_string(value->constant()) + " has no rational root of order " +
                                     std::to_string(s));
        branch = BranchChoice{Coefficient(*root), s};
      } else {
        branch = BranchChoice{free, s};
        c0 = free.pow(s);
      }
    }
  }
  b.initial.branch = branch;
  if (t.kind == InitialCase::c) {
    b.status = BranchStatus::resonant_free;
    b.resonance = t.mu0;
  }
  // Linear part of the recurrence: c_l (mu_l - mu_lin) = -(residual coefficient).
  const Rational mu_lin = t.kind == InitialCase::a ? Rational(0) : *t.mu_r;
  const bool resonant = t.kind == InitialCase::b && t.mu_r && *t.mu_r > t.mu0;
  bool pending = resonant && *t.mu_r < bound;
  b.resonance_beyond_bound = resonant && *t.mu_r >= bound;

  PuiseuxSeries y = PuiseuxSeries::monomial(c0, t.mu0);
  const Valuation cap(Rational(bound - 1));
  Valuation stop = Valuation::infinity();
  for (;;) {
    auto r = differentiate(y) - substitute_series(e.monomials, y, cap, branch);
    if (r.empty() && !r.is_exact_zero()) {
      // Nothing left below the cap: check whether the prefix is exact.
      try {
        auto full = differentiate(y) - substitute_series(e.monomials, y, Valuation::infinity(), branch);
        if (full.is_exact_zero()) r = full;
      } catch (const DomainError&) {
      }
    }
    if (r.is_exact_zero() && !pending) break;
    Rational mu = r.is_exact_zero() ? Rational(bound) : (r.empty() ? r.trunc().value() : r.leading_exponent()) + 1;
    if (pending && mu >= *t.mu_r) {
      if (mu == *t.mu_r && !r.empty()) {
        b.status = BranchStatus::negative_resonance;
        b.resonance = t.mu_r;
        b.obstruction = r.leading_coefficient();
        stop = Valuation(mu);
        break;
      }
      // The level mu_r equation is a tautology: the free constant enters.
      y = y + PuiseuxSeries::monomial(free, *t.mu_r);
      b.status = BranchStatus::resonant_free;
      b.resonance = t.mu_r;
      b.free_value = free;
      pending = false;
      continue;
    }
    if (r.empty() || mu >= bound) {
      stop = Valuation(mu);
      break;
    }
    if (mu == mu_lin) throw std::logic_error("recurrence reached the resonant level unexpectedly");
    y = y + PuiseuxSeries::monomial(-r.leading_coefficient() / Coefficient(mu - mu_lin), mu);
  }
  b.series = y.truncated(stop);
  b.residual_guarantee = stop.is_infinite() ? stop : Valuation(Rational(stop.value() - 1));
  return b;
}

Rational algebraic_branch_bound(const MonomialODE& e) {
  Exponent hi = e.monomials.front().sigma, lo = hi;
  for (const auto& m : e.monomials) {
    hi = std::max<Rational>(hi, m.sigma);
    lo = std::min<Rational>(lo, m.sigma);
  }
  const long s = e.ramification();
  Rational k = (hi - lo) * s - 1;
  return Rational(s) * pow(Rational(2), k.get_num().get_si());
}

namespace {

PuiseuxSeries exact_part(const PuiseuxSeries& y) { return PuiseuxSeries(y.terms(), Valuation::infinity()); }

}  // namespace

SolveResult solve_algebraic_type(const MonomialODE& e, const InitialTerm& t, const Exponent& bound) {
  if (classify(e, t) != BranchKind::algebraic_type)
    throw ClassificationError("solve_algebraic_type needs an algebraic-type initial term");
  SolveResult out;
  const long s = e.ramification();
  const Coefficient root = t.branch ? t.branch->root : *t.c0;
  const Rational delta = t.mu0 - 1 - ode_contour(e).at(t.mu0);
  const Rational u0 = t.mu0 / Rational(s);

  // sum_j p_j u^{n_j} with u = y^{1/s}, shifted so all powers are >= 0.
  std::map<long, PuiseuxSeries> p;
  long lo = 0, hi = 0;
  for (const auto& m : e.monomials) {
    long n = Rational(m.sigma * s).get_num().get_si();
    p[n] = p[n] + PuiseuxSeries::monomial(Coefficient(m.f), m.nu);
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }

  struct State {
    PuiseuxSeries u, y;
    std::vector<Exponent> coincidence;
  };
  std::vector<State> states{State{}};
  int rounds = 0;
  for (int k = 0;; ++k) {
    const Rational target = t.mu0 + delta * (k + 1);
    const Rational u_target = u0 + delta * (k + 1);
    std::vector<State> next;
    for (const auto& st : states) {
      std::vector<PuiseuxSeries> coeffs(static_cast<std::size_t>(hi - lo + 1));
      for (const auto& [n, pj] : p) coeffs[static_cast<std::size_t>(n - lo)] = pj;
      if (k > 0) coeffs[static_cast<std::size_t>(-lo)] = coeffs[static_cast<std::size_t>(-lo)] - differentiate(st.y);
      while (coeffs.size() > 2 && coeffs.back().is_exact_zero()) coeffs.pop_back();
      if (coeffs.back().is_exact_zero()) continue;
      auto sol = solve_algebraic(SeriesPolynomial(coeffs), u_target);
      auto matches = [&](const PuiseuxSeries& u) {
        if (u.empty() || u.leading_exponent() != u0 || u.leading_coefficient() != root) return false;
        return k == 0 || agree_below(u, st.u, st.u.trunc());
      };
      for (const auto& br : sol.branches) {
        if (!matches(br.series)) continue;
        if (br.series.trunc() < Valuation(u_target)) {
          out.diagnostics.push_back("algebraic-type round stopped short of its target");
          continue;
        }
        State ns;
        ns.u = br.series.truncated(Valuation(u_target));
        ns.y = (s == 1 ? ns.u : pow_int(ns.u, s)).truncated(Valuation(target));
        ns.coincidence = st.coincidence;
        auto r = residual(e, exact_part(ns.y), t.branch, Valuation(Rational(t.mu0 - 1 + delta * (k + 2))));
        ns.coincidence.push_back(r.value().value());
        next.push_back(std::move(ns));
      }
      for (const auto& u : sol.unresolved)
        if (u.prefix.empty() || matches(u.prefix))
          out.unresolved.push_back({t.mu0, s, u.vertex, "irrational vertex root at x^" + to_string(u.exponent)});
    }
    states = std::move(next);
    rounds = k;
    if (states.empty() || target >= bound) break;
  }
  for (auto& st : states) {
    SolutionBranch b;
    b.initial = t;
    b.kind = BranchKind::algebraic_type;
    b.status = BranchStatus::algebraic_type;
    b.series = st.y;
    b.iterations = rounds;
    b.coincidence = std::move(st.coincidence);
    b.residual_guarantee = Valuation(Rational(t.mu0 - 1 + delta * rounds));
    out.branches.push_back(std::move(b));
  }
  return out;
}

SolveResult solve_all(const MonomialODE& e, const Exponent& bound, const ResonancePolicy& policy) {
  SolveResult out;
  if (e.monomials.empty()) {
    out.zero_solution = true;
    out.diagnostics.push_back("right-hand side is zero: every constant is a solution");
    return out;
  }
  auto init = initial_terms(e);
  out.unresolved = init.unresolved;

  bool all_positive = true;
  for (const auto& m : e.monomials) all_positive = all_positive && m.sigma > 0;
  if (breaking_points(ode_contour(e)).empty() && all_positive) out.zero_solution = true;

  bool case_a = false;
  for (const auto& t : init.terms) {
    if (t.kind == InitialCase::a) case_a = true;
    switch (classify(e, t)) {
      case BranchKind::proper: {
        const bool free = !t.c0 || (t.kind == InitialCase::b && t.mu_r && *t.mu_r > t.mu0 && *t.mu_r < bound);
        std::vector<std::optional<Coefficient>> values{std::nullopt};
        if (free && !policy.values.empty()) {
          values.clear();
          for (const auto& v : policy.values) values.emplace_back(Coefficient(v));
        }
        for (const auto& v : values) {
          try {
            out.branches.push_back(continue_proper(e, t, bound, v));
          } catch (const BranchError& ex) {
            out.diagnostics.push_back("mu0 = " + to_string(t.mu0) + ": " + ex.what() + "; supply numeric values");
          } catch (const PoleError& ex) {
            out.diagnostics.push_back("mu0 = " + to_string(t.mu0) + ": " + ex.what());
          }
        }
        break;
      }
      case BranchKind::algebraic_type: {
        auto r = solve_algebraic_type(e, t, bound);
        for (auto& b : r.branches) out.branches.push_back(std::move(b));
        for (auto& u : r.unresolved) out.unresolved.push_back(std::move(u));
        for (auto& d : r.diagnostics) out.diagnostics.push_back(std::move(d));
        break;
      }
      case BranchKind::no_continuation: {
        SolutionBranch b;
        b.initial = t;
        b.kind = BranchKind::no_continuation;
        b.status = BranchStatus::no_continuation;
        b.series = PuiseuxSeries::big_o(Valuation(t.mu0));
        b.residual_guarantee = Valuation(Rational(t.mu0 - 1));
        out.branches.push_back(std::move(b));
        out.diagnostics.push_back(
            "mu0 = 0 with nu0 + 1 = 0: continuation needs the rescaling y -> x^(-eps) y (resonance at 0)");
        break;
      }
    }
  }
  if (!case_a && e.min_nu() + 1 <= 0)
    out.diagnostics.push_back("no solution starts with a constant: mu0 = 0 has no continuation (log-type)");

  if (e.expansion)
    for (auto& b : out.branches) {
      if (b.series.empty()) continue;
      auto cap = e.expansion->cap(b.series.leading_exponent());
      if (!cap)
        out.diagnostics.push_back("expansion tail is unbounded for the branch at mu0 = " + to_string(b.initial.mu0));
      else
        b.residual_guarantee = min(b.residual_guarantee, *cap);
    }
  return out;
}

namespace {

std::vector<PuiseuxSeries> taylor_shift(std::vector<PuiseuxSeries> b, const PuiseuxSeries& y0) {
  while (!b.empty() && b.back().is_exact_zero()) b.pop_back();
  if (y0.is_exact_zero() || b.size() < 2) return b;
  const std::size_t n = b.size() - 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = n; j-- > i;) b[j] = b[j] + y0 * b[j + 1];
  return b;
}

}  // namespace

MonomialODE expand_rational(const RationalODE& e, long y_order, const Valuation& x_cap) {
  auto p = taylor_shift(e.p, e.y0);
  auto q = taylor_shift(e.q, e.y0);
  if (q.empty()) throw DomainError("Q is zero");
  const auto y0_dot = differentiate(e.y0);

  std::size_t nonzero = 0, m = 0;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!q[i].is_exact_zero()) ++nonzero, m = i;
  if (nonzero == 1 && q[m].is_exact() && q[m].size() == 1) {
    // Monomial denominator: exact division, negative powers of y allowed.
    const auto& [qe, qc] = *q[m].terms().begin();
    std::vector<Monomial> out;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (!p[j].is_exact()) throw DomainError("monomial division needs exact numerator coefficients");
      for (const auto& [ex, c] : p[j].terms())
        out.push_back({ex - qe, Rational(static_cast<long>(j) - static_cast<long>(m)), (c / qc).constant()});
    }
    for (const auto& [ex, c] : y0_dot.terms()) out.push_back({ex, Rational(0), -c.constant()});
    return MonomialODE(std::move(out));
  }
  if (q[0].empty()) throw PoleError("Q(y0) = 0: expansion centre is a pole");

  const auto inv = invert(q[0], x_cap);
  std::vector<PuiseuxSeries> h(static_cast<std::size_t>(y_order) + 1);
  h[0] = inv;
  for (long k = 1; k <= y_order; ++k) {
    PuiseuxSeries acc;
    for (long i = 1; i <= k && i < static_cast<long>(q.size()); ++i)
      acc = acc + (q[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(k - i)]).truncated(x_cap);
    h[static_cast<std::size_t>(k)] = -(inv * acc).truncated(x_cap);
  }
  std::vector<Monomial> out;
  ExpansionRecord rec;
  rec.y_order = y_order;
  for (long k = 0; k <= y_order; ++k) {
    PuiseuxSeries g;
    for (long j = 0; j <= k && j < static_cast<long>(p.size()); ++j)
      g = g + (p[static_cast<std::size_t>(j)] * h[static_cast<std::size_t>(k - j)]).truncated(x_cap);
    if (k == 0) g = g - y0_dot;
    rec.x_cap = min(rec.x_cap, g.trunc());
    for (const auto& [ex, c] : g.terms()) out.push_back({ex, Rational(k), c.constant()});
  }
  rec.y_exact = q.size() == 1 && y_order + 1 >= static_cast<long>(p.size());
  const Rational v0 = q[0].order().value();
  bool first = true;
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (q[i].is_exact_zero()) continue;
    Rational r = (q[i].order().value() - v0) / Rational(static_cast<long>(i));
    rec.rho = first ? r : std::min<Rational>(rec.rho, r);
    first = false;
  }
  first = true;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j].is_exact_zero()) continue;
    Rational r = p[j].order().value() - Rational(static_cast<long>(j)) * rec.rho - v0;
    rec.offset = first ? r : std::min<Rational>(rec.offset, r);
    first = false;
  }
  MonomialODE res(std::move(out));
  res.expansion = rec;
  return res;
}

ResidualReport residual(const MonomialODE& e, const PuiseuxSeries& y, const std::optional<BranchChoice>& branch,
                        const Valuation& cap) {
  auto r = differentiate(y) - substitute_series(e.monomials, y, cap, branch);
  return {r.valuation(), r.trunc()};
}

ResidualReport verify_branch(const MonomialODE& e, const SolutionBranch& b) {
  Valuation cap = b.series.trunc();
  if (cap.is_infinite()) {
    try {
      return residual(e, b.series, b.initial.branch, cap);
    } catch (const DomainError&) {
      // An exact series whose powers expand infinitely: look a few orders past it.
      cap = Valuation(Rational(b.series.terms().rbegin()->first + 8));
    }
  }
  return residual(e, b.series, b.initial.branch, cap);
}

}  // namespace puiseux
