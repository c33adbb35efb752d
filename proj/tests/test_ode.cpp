#include "doctest.h"
#include "puiseux/ode.hpp"
#include "support.hpp"

#include <set>

using namespace puiseux;
using namespace puiseux::testing;

namespace {

MonomialODE ode(std::initializer_list<Monomial> m) { return MonomialODE(std::vector<Monomial>(m)); }

const MonomialODE y_squared = ode({{Q(0), Q(2), Q(1)}});
const MonomialODE y_over_x = ode({{Q(-1), Q(1), Q(1)}});
const MonomialODE y_over_x_plus_x = ode({{Q(-1), Q(1), Q(1)}, {Q(1), Q(0), Q(1)}});
const MonomialODE riccati_free = ode({{Q(-2), Q(2), Q(1)}});
const MonomialODE algebraic = ode({{Q(-2), Q(2), Q(1)}, {Q(-1), Q(0), Q(-1)}});

struct Row {
  Rational mu0;
  std::optional<Rational> c0;
  InitialCase kind;
  std::optional<Rational> mu_r;
};

void check_table(const MonomialODE& e, std::vector<Row> rows) {
  auto got = initial_terms(e).terms;
  REQUIRE(got.size() == rows.size());
  for (const auto& row : rows) {
    bool found = false;
    for (const auto& t : got) {
      bool c0_match = row.c0 ? (t.c0 && *t.c0 == Coefficient(*row.c0)) : !t.c0;
      if (t.mu0 == row.mu0 && c0_match && t.kind == row.kind && t.mu_r == row.mu_r) found = true;
    }
    CHECK_MESSAGE(found, "missing initial term at mu0 = " << row.mu0);
  }
}

// Dense undetermined coefficients for y' = sum f x^nu y^sigma with integer
// nu, natural sigma and y = sum_{k >= 1} c_k x^k. Returns the left minus right
// side coefficient at x^level for the given coefficient vector.
Rational level_equation(const std::vector<Monomial>& rhs, const std::vector<Rational>& c, long level) {
  const long n = static_cast<long>(c.size()) + 4;
  auto mulv = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> out(static_cast<std::size_t>(n), Rational(0));
    for (long i = 0; i < n; ++i)
      for (long j = 0; i + j < n; ++j) out[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)];
    return out;
  };
  std::vector<Rational> y(static_cast<std::size_t>(n), Rational(0));
  for (std::size_t k = 0; k < c.size(); ++k) y[k] = c[k];
  Rational lhs = level + 1 < static_cast<long>(c.size()) ? c[static_cast<std::size_t>(level + 1)] * (level + 1) : Rational(0);
  Rational rhs_value = 0;
  for (const auto& m : rhs) {
    std::vector<Rational> p(static_cast<std::size_t>(n), Rational(0));
    p[0] = 1;
    for (long k = 0; k < m.sigma.get_num().get_si(); ++k) p = mulv(p, y);
    long idx = level - m.nu.get_num().get_si();
    if (idx >= 0 && idx < n) rhs_value += m.f * p[static_cast<std::size_t>(idx)];
  }
  return lhs - rhs_value;
}

void check_branch(const MonomialODE& e, const SolutionBranch& b) {
  auto v = verify_branch(e, b);
  CHECK(v.value() >= b.residual_guarantee);
}

}  // namespace

TEST_CASE("ode_contour") {
  auto c = ode_contour(y_squared);
  CHECK(c.at(Q(-1)) == Q(-2));
  auto bps = breaking_points(c);
  REQUIRE(bps.size() == 1);
  CHECK(bps[0].x == Q(-1));

  c = ode_contour(y_over_x);
  for (long x = -3; x <= 3; ++x) CHECK(c.at(Q(x)) == Q(x - 1));
  CHECK(breaking_points(c).empty());

  c = ode_contour(y_over_x_plus_x);
  bps = breaking_points(c);
  REQUIRE(bps.size() == 1);
  CHECK(bps[0].x == 2);
  CHECK(c.at(Q(5)) == 1);
}

TEST_CASE("initial_terms tables") {
  check_table(y_squared, {{Q(-1), Q(-1), InitialCase::b, Q(-2)}, {Q(0), std::nullopt, InitialCase::a, std::nullopt}});
  check_table(y_over_x, {{Q(1), std::nullopt, InitialCase::c, Q(1)}});
  check_table(y_over_x_plus_x, {{Q(2), Q(1), InitialCase::b, Q(1)}, {Q(1), std::nullopt, InitialCase::c, Q(1)}});
  check_table(riccati_free, {{Q(1), Q(1), InitialCase::b, Q(2)}});
  check_table(algebraic, {{Q(1, 2), Q(1), InitialCase::b, Q(2)}, {Q(1, 2), Q(-1), InitialCase::b, Q(-2)}});
}

TEST_CASE("fractional powers use a ramified vertex") {
  // y' = y^(1/2): vertex t - 2 t^2 at mu0 = 2, so c0 = t^2 = 1/4.
  auto e = ode({{Q(0), Q(1, 2), Q(1)}});
  auto terms = initial_terms(e).terms;
  REQUIRE(terms.size() == 2);
  const auto& t = terms[1];
  CHECK(t.mu0 == 2);
  CHECK(*t.c0 == Coefficient(Q(1, 4)));
  REQUIRE(t.branch);
  CHECK(t.branch->root == Coefficient(Q(1, 2)));
  auto b = continue_proper(e, t, Q(4));
  CHECK(b.series == S("1/4*x^(2)"));

  // The free constant term parametrizes c0 = C^2: (C + x/2)^2.
  auto free = continue_proper(e, terms[0], Q(3), Coefficient(Q(9)));
  CHECK(agree_below(free.series, S("9 + 3*x^(1) + 1/4*x^(2)"), free.series.trunc()));
  check_branch(e, free);
}

TEST_CASE("classify") {
  for (const auto& t : initial_terms(y_squared).terms) CHECK(classify(y_squared, t) == BranchKind::proper);
  for (const auto& t : initial_terms(algebraic).terms) CHECK(classify(algebraic, t) == BranchKind::algebraic_type);
  auto log_type = ode({{Q(-1), Q(-1), Q(1)}});
  CHECK(initial_terms(log_type).terms.empty());
  InitialTerm t{Q(0), std::nullopt, InitialCase::a, std::nullopt, std::nullopt, false};
  CHECK(classify(log_type, t) == BranchKind::no_continuation);
  t.c0 = Coefficient(1);
  CHECK(classify(log_type, t) == BranchKind::no_continuation);
  CHECK_THROWS_AS(continue_proper(log_type, t, Q(2)), ClassificationError);
  CHECK_THROWS_AS(solve_algebraic_type(y_squared, initial_terms(y_squared).terms[0], Q(2)), ClassificationError);
}

TEST_CASE("index_lattice") {
  auto t = initial_terms(riccati_free).terms.at(0);
  auto l = index_lattice(riccati_free, t, Q(6));
  CHECK(l.generators.empty());
  CHECK(l.elements == std::vector<Exponent>{Q(1)});
  auto w = l.widened(*t.mu_r - t.mu0);
  CHECK(w.elements == std::vector<Exponent>{Q(1), Q(2), Q(3), Q(4), Q(5), Q(6)});

  auto ts = initial_terms(y_squared).terms;
  l = index_lattice(y_squared, ts[0], Q(3));
  CHECK(l.elements == std::vector<Exponent>{Q(-1)});

  // y' = 2y/x + x^(3/2) + x^2 from mu0 = 2: shifts 1/2 and 1.
  auto e = ode({{Q(-1), Q(1), Q(2)}, {Q(3, 2), Q(0), Q(1)}, {Q(2), Q(0), Q(1)}});
  InitialTerm c{Q(2), std::nullopt, InitialCase::c, Q(2), std::nullopt, false};
  l = index_lattice(e, c, Q(3));
  CHECK(l.generators == std::vector<Exponent>{Q(1, 2), Q(1)});
  CHECK(l.elements == std::vector<Exponent>{Q(2), Q(5, 2), Q(3)});
}

TEST_CASE("lattice decompositions") {
  IndexLattice l;
  l.offset = 0;
  l.generators = {Q(2), Q(3), Q(5)};
  l.bound = Valuation(Q(8));
  auto w = l.widened(Q(0));
  CHECK(w.elements == std::vector<Exponent>{Q(0), Q(2), Q(3), Q(4), Q(5), Q(6), Q(7), Q(8)});
  CHECK(w.non_decomposable() == std::vector<Exponent>{Q(2), Q(3)});
  CHECK(w.non_decomposable_for(Q(4)) == std::vector<Exponent>{Q(2)});
  CHECK(w.non_decomposable_for(Q(5)) == std::vector<Exponent>{Q(2), Q(3)});
  CHECK(w.contains(Q(11)));
  CHECK_FALSE(w.contains(Q(1)));
}

TEST_CASE("negative generators are rejected") {
  auto t = initial_terms(algebraic).terms.at(0);
  CHECK_THROWS_AS(index_lattice(algebraic, t, Q(3)), ClassificationError);
}

TEST_CASE("continue_proper examples") {
  auto terms = initial_terms(y_squared).terms;
  auto b = continue_proper(y_squared, terms[0], Q(3));
  CHECK(b.series == S("-1*x^(-1)"));
  CHECK(b.status == BranchStatus::unique);
  CHECK(verify_branch(y_squared, b).exact());

  b = continue_proper(y_squared, terms[1], Q(4), Coefficient(2));
  CHECK(b.status == BranchStatus::unique);
  for (long k = 0; k < 4; ++k) CHECK(b.series.coefficient(Q(k)) == Coefficient(pow(Q(2), k + 1)));
  CHECK(b.series.trunc() == Valuation(Q(4)));

  auto t = initial_terms(riccati_free).terms.at(0);
  b = continue_proper(riccati_free, t, Q(6), Coefficient(5));
  CHECK(b.status == BranchStatus::resonant_free);
  CHECK(*b.resonance == 2);
  for (long k = 1; k < 6; ++k) CHECK(b.series.coefficient(Q(k)) == Coefficient(pow(Q(5), k - 1)));
  CHECK(verify_branch(riccati_free, b).support.is_infinite());

  for (const auto& tt : initial_terms(y_over_x_plus_x).terms)
    if (tt.kind == InitialCase::b) {
      b = continue_proper(y_over_x_plus_x, tt, Q(4));
      CHECK(b.series == S("1*x^(2)"));
      CHECK(b.status == BranchStatus::unique);
    }
}

TEST_CASE("resonance dichotomy") {
  auto t = initial_terms(riccati_free).terms.at(0);
  auto b1 = continue_proper(riccati_free, t, Q(7), Coefficient(3));
  auto b2 = continue_proper(riccati_free, t, Q(7), Coefficient(-2));
  check_branch(riccati_free, b1);
  check_branch(riccati_free, b2);
  CHECK((b1.series - b2.series).valuation() == Valuation(Q(2)));

  // y' = x^(-2) y^2 + y: the level x^1 equation 2 c_2 = 2 c_2 + c_1 fails.
  auto pert = ode({{Q(-2), Q(2), Q(1)}, {Q(0), Q(1), Q(1)}});
  auto tp = initial_terms(pert).terms.at(0);
  CHECK(*tp.mu_r == 2);
  auto bn = continue_proper(pert, tp, Q(5));
  CHECK(bn.status == BranchStatus::negative_resonance);
  REQUIRE(bn.obstruction);
  CHECK(*bn.resonance == 2);
  CHECK(bn.series.trunc() <= Valuation(Q(2)));
  // Oracle: the level equation does not involve c_2 and is never zero.
  Rational e0 = level_equation(pert.monomials, {Q(0), Q(1), Q(0)}, 1);
  Rational e1 = level_equation(pert.monomials, {Q(0), Q(1), Q(7)}, 1);
  CHECK(e0 == e1);
  CHECK(e0 != 0);
  CHECK(*bn.obstruction == Coefficient(e0));
}

TEST_CASE("undetermined coefficients agree with continue_proper") {
  // y' = y^2 + x from y(0) = c: brute-force levels against the series.
  auto e = ode({{Q(0), Q(2), Q(1)}, {Q(1), Q(0), Q(1)}});
  for (long c : {-2L, 1L, 3L}) {
    InitialTerm t{Q(0), std::nullopt, InitialCase::a, std::nullopt, std::nullopt, false};
    auto b = continue_proper(e, t, Q(7), Coefficient(c));
    std::vector<Rational> coeff;
    for (long k = 0; k < 7; ++k) coeff.push_back(b.series.coefficient(Q(k)).constant());
    for (long level = 0; level < 6; ++level) CHECK(level_equation(e.monomials, coeff, level) == 0);
  }
}

TEST_CASE("algebraic-type iteration") {
  auto r = solve_all(algebraic, Q(3));
  REQUIRE(r.branches.size() == 2);
  CHECK(Rational(static_cast<long>(r.branches.size())) <= algebraic_branch_bound(algebraic));
  CHECK(algebraic_branch_bound(algebraic) == 2);
  for (const auto& b : r.branches) {
    CHECK(b.status == BranchStatus::algebraic_type);
    CHECK(b.iterations >= 4);
    REQUIRE(b.coincidence.size() >= 5);
    for (std::size_t i = 1; i < b.coincidence.size(); ++i) CHECK(b.coincidence[i] - b.coincidence[i - 1] == Q(1, 2));
    CHECK(b.residual_guarantee >= Valuation(Q(1, 2) - 1 + Q(4) * Q(1, 2)));
    check_branch(algebraic, b);
  }
  auto plus = r.branches[0].series.leading_coefficient() == Coefficient(1) ? r.branches[0] : r.branches[1];
  CHECK(agree_below(plus.series, S("1*x^(1/2) + 1/4*x^(1)"), Valuation(Q(3, 2))));
  auto minus = r.branches[0].series.leading_coefficient() == Coefficient(1) ? r.branches[1] : r.branches[0];
  CHECK(agree_below(minus.series, S("-1*x^(1/2) + 1/4*x^(1)"), Valuation(Q(3, 2))));
  // Mirror symmetry y(x) -> -y of the x^(1/2) scale: coefficients alternate.
  for (const auto& [e, c] : plus.series.terms()) {
    Rational k = e * 2;
    Coefficient sign = (k.get_num().get_si() % 2 == 0) ? Coefficient(1) : Coefficient(-1);
    CHECK(minus.series.coefficient(e) == c * sign);
  }
}

TEST_CASE("solve_all examples") {
  auto r = solve_all(y_over_x_plus_x, Q(4));
  REQUIRE(r.branches.size() == 2);
  for (const auto& b : r.branches) CHECK(verify_branch(y_over_x_plus_x, b).exact());
  CHECK(r.branches[0].status == BranchStatus::resonant_free);
  CHECK(r.branches[0].series.to_string() == "(C)*x^(1) + 1*x^(2)");
  CHECK(r.branches[1].series == S("1*x^(2)"));

  r = solve_all(y_squared, Q(3));
  REQUIRE(r.branches.size() == 2);
  CHECK(r.branches[0].series == S("-1*x^(-1)"));
  CHECK(r.branches[1].initial.kind == InitialCase::a);

  r = solve_all(y_over_x, Q(3), ResonancePolicy{{Q(2), Q(-1)}});
  REQUIRE(r.branches.size() == 2);
  CHECK(r.branches[0].series == S("2*x^(1)"));
  CHECK(r.branches[1].series == S("-1*x^(1)"));

  // No breaking points: y = 0 solves, next to the constant-start family.
  auto flat = ode({{Q(0), Q(1), Q(1)}, {Q(1), Q(1), Q(1)}});
  CHECK(breaking_points(ode_contour(flat)).empty());
  r = solve_all(flat, Q(3));
  CHECK(r.zero_solution);
  REQUIRE(r.branches.size() == 1);
  CHECK(r.branches[0].initial.kind == InitialCase::a);
}

TEST_CASE("expand_rational") {
  auto one = S("1");
  auto e = expand_rational({{PuiseuxSeries(), PuiseuxSeries(), one}, {one}, {}}, 3);
  CHECK(e.monomials == std::vector<Monomial>{{Q(0), Q(2), Q(1)}});
  e = expand_rational({{one}, {PuiseuxSeries(), one}, {}}, 3);
  CHECK(e.monomials == std::vector<Monomial>{{Q(0), Q(-1), Q(1)}});
  CHECK_FALSE(e.expansion);
  e = expand_rational({{PuiseuxSeries(), one}, {one, one}, {}}, 3);
  CHECK(e.monomials == std::vector<Monomial>{{Q(0), Q(1), Q(1)}, {Q(0), Q(2), Q(-1)}, {Q(0), Q(3), Q(1)}});
  // Q = y^2 - 1 vanishes at y0 = 1.
  CHECK_THROWS_AS(expand_rational({{one}, {S("-1"), PuiseuxSeries(), one}, S("1")}, 3), PoleError);
  // Shifted to a monomial denominator: Q(y + 1) = y.
  e = expand_rational({{one}, {S("-1"), one}, S("1")}, 3);
  CHECK(e.monomials == std::vector<Monomial>{{Q(0), Q(-1), Q(1)}});
}

TEST_CASE("expansion caps the guarantee") {
  // y' = x^(-2) y^2 / (1 + y)
  auto rode = RationalODE{{PuiseuxSeries(), PuiseuxSeries(), S("1*x^(-2)")}, {S("1"), S("1")}, {}};
  auto e = expand_rational(rode, 4);
  REQUIRE(e.expansion);
  auto r = solve_all(e, Q(6), ResonancePolicy{{Q(3)}});
  REQUIRE(!r.branches.empty());
  for (const auto& b : r.branches) {
    auto cap = e.expansion->cap(b.series.leading_exponent());
    REQUIRE(cap);
    CHECK(b.residual_guarantee <= *cap);
    // Residual against the rational right-hand side itself.
    const auto& y = b.series;
    auto rhs = (y * y).shifted(Q(-2)) * invert(S("1") + y, y.trunc());
    auto res = differentiate(y) - rhs;
    CHECK(res.order() >= b.residual_guarantee);
  }
}

TEST_CASE("random monomial equations: soundness and lattice confinement") {
  SeriesGen g(31);
  int proper = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Monomial> ms;
    auto n = g.uniform(1, 3);
    for (long i = 0; i < n; ++i) ms.push_back({Q(g.uniform(-3, 2)), Q(g.uniform(0, 3)), Q(g.uniform(-3, 3) | 1)});
    MonomialODE e(ms);
    if (e.monomials.empty()) continue;
    INFO("trial " << trial);
    auto r = solve_all(e, Q(4), ResonancePolicy{{Q(2)}});
    std::set<Exponent> mus;
    for (const auto& t : initial_terms(e).terms)
      if (t.kind == InitialCase::b) mus.insert(t.mu0);
    for (const auto& bp : breaking_points(ode_contour(e))) {
      if (mus.count(bp.x)) CHECK(bp.x != 0);
    }
    for (const auto& b : r.branches) {
      if (b.kind == BranchKind::no_continuation) continue;
      auto v = verify_branch(e, b);
      CHECK_MESSAGE(v.value() >= b.residual_guarantee, "trial " << trial << " mu0 " << b.initial.mu0 << " " << b.series.to_string());
      if (b.kind != BranchKind::proper) continue;
      ++proper;
      auto l = index_lattice(e, b.initial, Q(4));
      if (b.resonance && *b.resonance > b.initial.mu0) l = l.widened(*b.resonance - b.initial.mu0);
      for (const auto& [ex, c] : b.series.terms()) CHECK_MESSAGE(l.contains(ex), "exponent " << ex << " outside lattice");
    }
  }
  CHECK(proper > 20);
}
