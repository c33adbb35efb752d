#include "doctest.h"

#include "puiseux/algebraic.hpp"
#include "support.hpp"

using namespace puiseux;
using namespace puiseux::testing;

namespace {

SeriesPolynomial P(std::initializer_list<const char*> coeffs) {
  std::vector<PuiseuxSeries> v;
  for (auto c : coeffs) v.push_back(S(c));
  return SeriesPolynomial(std::move(v));
}

// Coefficients of the power-series roots of y^2 - y + x from
// sum_{i+j=n} a_i a_j - a_n + [n = 1] = 0.
std::vector<Rational> quadratic_oracle(const Rational& a0, int n) {
  std::vector<Rational> a{a0};
  for (int k = 1; k <= n; ++k) {
    Rational s = k == 1 ? Rational(1) : Rational(0);
    for (int i = 1; i < k; ++i) s += a[i] * a[k - i];
    a.push_back(-s / (2 * a0 - 1));
  }
  return a;
}

const PartialSolution* with_leading(const AlgebraicSolution& s, const Exponent& e, const Rational& c) {
  for (const auto& b : s.branches)
    if (!b.series.empty() && b.series.leading_exponent() == e && b.series.leading_coefficient() == Coefficient(c))
      return &b;
  return nullptr;
}

PuiseuxSeries exact_prefix(const PuiseuxSeries& y) { return PuiseuxSeries(y.terms(), Valuation::infinity()); }

void check_solution(const SeriesPolynomial& p, const AlgebraicSolution& s, const Exponent& bound) {
  for (const auto& b : s.branches) {
    auto r = p.evaluate(exact_prefix(b.series));
    CHECK(r.order() >= b.residual_bound);
    CHECK(b.residual_bound >= Valuation(bound));
    for (std::size_t i = 1; i < b.killed.size(); ++i) CHECK(b.killed[i - 1] < b.killed[i]);
    if (b.series.is_exact()) CHECK(r.is_exact_zero());
  }
}

}  // namespace

TEST_CASE("contour") {
  auto c = contour(P({"-1", "0", "1"}));
  REQUIRE(c.lines.size() == 2);
  CHECK(c.at(Q(1, 4)) == Q(0));
  c = contour(P({"-1*x^(1)", "0", "1"}));
  CHECK(c.at(Q(1, 4)) == Q(1, 2));
  CHECK(c.at(Q(1)) == Q(1));
  c = contour(P({"-1", "1"}));
  CHECK(c.at(Q(-2)) == Q(-2));
  CHECK(c.at(Q(3)) == Q(0));
}

TEST_CASE("breaking_points") {
  auto b = breaking_points(contour(P({"-1*x^(1)", "0", "1"})));
  REQUIRE(b.size() == 1);
  CHECK(b[0].x == Q(1, 2));
  CHECK(b[0].active.size() == 2);
  CHECK(*vertex_polynomial(b[0]) == UniPoly({Q(-1), Q(0), Q(1)}));

  b = breaking_points(contour(P({"1*x^(1)", "-1", "1"})));
  REQUIRE(b.size() == 2);
  CHECK(b[0].x == 0);
  CHECK(b[0].vertex.size() == 2);
  CHECK(b[0].vertex.at(Q(1)) == Coefficient(-1));
  CHECK(b[0].vertex.at(Q(2)) == Coefficient(1));
  CHECK(b[1].x == 1);
  CHECK(*vertex_polynomial(b[1]) == UniPoly({Q(1), Q(-1)}));

  CHECK(breaking_points(contour(P({"0", "0", "0", "1"}))).empty());
}

TEST_CASE("recenter") {
  auto p = P({"-1*x^(1)", "0", "1"});
  CHECK(recenter(p, PuiseuxSeries()).coeffs() == p.coeffs());
  auto r = recenter(p, S("1*x^(1/2)"));
  CHECK(r.coeff(0).is_exact_zero());
  CHECK(r.coeff(1) == S("2*x^(1/2)"));
  CHECK(r.coeff(2) == S("1"));
  r = recenter(P({"1*x^(1)", "-1", "1"}), S("1*x^(1)"));
  CHECK(r.coeff(0) == S("1*x^(2)"));
  CHECK(r.coeff(1) == S("-1 + 2*x^(1)"));
  CHECK(r.coeff(2) == S("1"));
}

TEST_CASE("recentering equals repeated derivatives") {
  SeriesGen g(11);
  for (int t = 0; t < 40; ++t) {
    std::vector<PuiseuxSeries> c;
    auto n = static_cast<std::size_t>(g.uniform(1, 4));
    for (std::size_t i = 0; i <= n; ++i) c.push_back(g.series(3, false, 0, 3));
    SeriesPolynomial p(c);
    auto y0 = g.series(2, false, 0, 2);
    auto r = recenter(p, y0);
    // beta_i is the i-th Taylor coefficient: evaluate the formal derivative.
    std::vector<PuiseuxSeries> d = c;
    Rational fact = 1;
    for (std::size_t i = 0; i <= n; ++i) {
      PuiseuxSeries acc;
      for (std::size_t j = d.size(); j-- > 0;) acc = acc * y0 + d[j];
      CHECK(r.coeff(i) == acc.scaled(Coefficient(1 / fact)));
      std::vector<PuiseuxSeries> dd;
      for (std::size_t j = 1; j < d.size(); ++j) dd.push_back(d[j].scaled(Coefficient(static_cast<long>(j))));
      d = dd;
      fact *= static_cast<long>(i + 1);
    }
  }
}

TEST_CASE("solve_algebraic examples") {
  auto s = solve_algebraic(P({"-1*x^(1)", "0", "1"}), Q(3));
  REQUIRE(s.branches.size() == 2);
  CHECK(s.unresolved.empty());
  CHECK(s.branches[0].series == S("-1*x^(1/2)"));
  CHECK(s.branches[1].series == S("1*x^(1/2)"));
  CHECK(s.branches[0].residual_bound.is_infinite());

  s = solve_algebraic(P({"1", "-2", "1"}), Q(2));
  REQUIRE(s.branches.size() == 1);
  CHECK(s.branches[0].series == S("1"));
  CHECK(s.branches[0].multiplicity == 2);

  auto p = P({"1*x^(1)", "-1", "1"});
  s = solve_algebraic(p, Q(9, 2));
  REQUIRE(s.branches.size() == 2);
  check_solution(p, s, Q(9, 2));
  for (Rational a0 : {Rational(0), Rational(1)}) {
    auto oracle = quadratic_oracle(a0, 4);
    const auto* b = with_leading(s, a0 == 0 ? Q(1) : Q(0), a0 == 0 ? Q(1) : Q(1));
    REQUIRE(b != nullptr);
    for (int k = 0; k <= 4; ++k) CHECK(b->series.coefficient(Q(k)) == Coefficient(oracle[k]));
  }
  CHECK(with_leading(s, Q(1), Q(1))->series.to_string() == "1*x^(1) + 1*x^(2) + 2*x^(3) + 5*x^(4) + O(x^(5))");
}

TEST_CASE("irrational vertex roots are reported") {
  auto s = solve_algebraic(P({"-2*x^(1)", "0", "1"}), Q(2));
  CHECK(s.branches.empty());
  REQUIRE(s.unresolved.size() == 1);
  CHECK(s.unresolved[0].exponent == Q(1, 2));
  CHECK(s.unresolved[0].count == 2);
  CHECK(s.unresolved[0].vertex == UniPoly({Q(-2), Q(0), Q(1)}));

  // An unresolved factor deeper in the construction keeps its prefix.
  // (y - 1)^2 - 2x^2 = y^2 - 2y + 1 - 2x^2
  s = solve_algebraic(P({"1 + -2*x^(2)", "-2", "1"}), Q(3));
  REQUIRE(s.unresolved.size() == 1);
  CHECK(s.unresolved[0].prefix == S("1"));
  CHECK(s.unresolved[0].exponent == 1);
  CHECK(s.root_count() == 2);
}

TEST_CASE("inexact coefficients stop conservatively") {
  auto p = P({"1*x^(1) + O(x^(3))", "-1", "1"});
  auto s = solve_algebraic(p, Q(5));
  REQUIRE(s.branches.size() == 2);
  for (const auto& b : s.branches) {
    auto r = p.evaluate(exact_prefix(b.series));
    CHECK(r.order() >= b.residual_bound);
    CHECK(b.series.trunc() <= Valuation(Q(3)));
  }
  auto exact = solve_algebraic(P({"1*x^(1)", "-1", "1"}), Q(5));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(agree_below(s.branches[i].series, exact.branches[i].series, s.branches[i].series.trunc()));
}

TEST_CASE("random split polynomials: count, residual, progress") {
  SeriesGen g(2024);
  for (int t = 0; t < 60; ++t) {
    auto n = static_cast<std::size_t>(g.uniform(1, 4));
    auto p = random_split_polynomial(g, n);
    Exponent bound = make_rational(g.uniform(0, 8), 2);
    auto s = solve_algebraic(p, bound);
    CHECK(s.unresolved.empty());
    CHECK(s.root_count() == static_cast<int>(n));
    check_solution(p, s, bound);
  }
}

TEST_CASE("solving after recentering shifts the roots") {
  SeriesGen g(77);
  for (int t = 0; t < 30; ++t) {
    auto p = random_split_polynomial(g, static_cast<std::size_t>(g.uniform(1, 3)));
    auto y0 = g.series(2, false, 0, 2);
    Exponent bound = 3;
    auto a = solve_algebraic(p, bound);
    auto b = solve_algebraic(recenter(p, y0), bound);
    CHECK(a.root_count() == b.root_count());
    // Groups may split at different stages; every root must match a shifted
    // root below the common truncation.
    for (const auto& ar : a.branches) {
      bool found = false;
      for (const auto& br : b.branches) {
        auto shifted = br.series + y0;
        if (agree_below(ar.series, shifted, min(ar.series.trunc(), shifted.trunc()))) found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("closed_form_root") {
  // y^2 - x^(-1): normalized instance of y^2 - x after y -> x^(1/2) y.
  auto p = P({"-1*x^(-1)", "0", "1"});
  auto in = ClosedFormInput::from_polynomial(p, Coefficient(1));
  CHECK(in.k == 2);
  auto y = closed_form_root(in, 4);
  auto s = solve_algebraic(p, Q(3));
  const auto* b = with_leading(s, Q(-1, 2), Q(1));
  REQUIRE(b != nullptr);
  CHECK(y.leading_exponent() == b->series.leading_exponent());
  CHECK(y.leading_coefficient() == b->series.leading_coefficient());

  // Linear case: y + a_1 = 0 is solved by -a_1 alone.
  auto lin = P({"2*x^(-3) + 1 + 5*x^(2)", "1"});
  auto root = closed_form_root(ClosedFormInput::from_polynomial(lin, Coefficient(-2)), 5);
  CHECK(agree_below(root, S("-2*x^(-3) + -1 + -5*x^(2)"), root.trunc()));

  // k = 1 in degree 2: the root of y^2 + a1 y + a2 is -a1 + a2/a1 - a2^2/a1^3 + ...
  auto quad = P({"3", "-1*x^(-1)", "1"});
  root = closed_form_root(ClosedFormInput::from_polynomial(quad, Coefficient(1)), 4);
  CHECK(root.trunc() == Valuation(Q(4)));
  auto geo = S("1*x^(-1) + -3*x^(1) + -9*x^(3)");
  CHECK(agree_below(root, geo, Valuation(Q(4))));

  CHECK_THROWS_AS(ClosedFormInput::from_polynomial(P({"1", "0", "1"}), Coefficient(1)), std::invalid_argument);
  ClosedFormInput bad = in;
  bad.a[0] = S("2");
  CHECK_THROWS_AS(closed_form_root(bad, 3), std::invalid_argument);
}

TEST_CASE("closed form agrees with the construction on generic degree-3 instances") {
  SeriesGen g(5);
  for (int t = 0; t < 15; ++t) {
    long k = g.uniform(1, 3);
    Rational u0 = g.coefficient();
    long e = g.uniform(1, 3);
    std::vector<PuiseuxSeries> alpha(4);
    alpha[3] = S("1");
    for (long i = 1; i <= 3; ++i) {
      if (i == k) {
        auto lead = PuiseuxSeries::monomial(Coefficient(-pow(u0, k)), Rational(-e));
        alpha[3 - i] = lead + g.series(2, false, 0, 2);
      } else if (g.uniform(0, 2) > 0) {
        alpha[3 - i] = g.series(2, false, 0, 2);
      }
    }
    if (alpha[0].empty() && k != 3) alpha[0] = S("1");
    SeriesPolynomial p(alpha);
    auto y = closed_form_root(ClosedFormInput::from_polynomial(p, Coefficient(u0)), 5);
    auto s = solve_algebraic(p, y.trunc().value());
    const auto* b = with_leading(s, make_rational(-e, k), u0);
    REQUIRE(b != nullptr);
    CHECK(agree_below(y, b->series, min(y.trunc(), b->series.trunc())));
    CHECK(b->series.trunc() >= y.trunc());
  }
}
