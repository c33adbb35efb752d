#pragma once

#include <map>
#include <optional>
#include <vector>

#include "puiseux/series.hpp"

namespace puiseux {

/// w(y) = sum_{i=0}^N alpha_i y^i with series coefficients, alpha_N != 0.
class SeriesPolynomial {
 public:
  explicit SeriesPolynomial(std::vector<PuiseuxSeries> coeffs);

  std::size_t degree() const { return coeffs_.size() - 1; }
  const std::vector<PuiseuxSeries>& coeffs() const { return coeffs_; }
  const PuiseuxSeries& coeff(std::size_t i) const { return coeffs_.at(i); }

  /// w(y) by Horner's rule.
  PuiseuxSeries evaluate(const PuiseuxSeries& y) const;

 private:
  std::vector<PuiseuxSeries> coeffs_;
};

/// One line intercept + slope*x of a contour (Newton polygon) function.
/// `lead` is the coefficient carried into vertex polynomials; `tag` names the
/// source (the power of y for algebraic equations, the monomial index for
/// differential ones, -1 for the derivative side x - 1).
struct ContourLine {
  Exponent intercept;
  Exponent slope;
  Coefficient lead;
  int tag = 0;
};

/// x -> min over lines of intercept + slope * x.
struct Contour {
  std::vector<ContourLine> lines;

  Rational at(const Rational& x) const;
  /// Indices of the lines realizing the minimum at x.
  std::vector<std::size_t> active(const Rational& x) const;
};

struct BreakPoint {
  Exponent x;
  Rational value;                      // contour value at x
  std::vector<std::size_t> active;     // indices into Contour::lines
  std::map<Exponent, Coefficient> vertex;  // slope -> summed lead: sum lead c^slope
};

Contour contour(const SeriesPolynomial& p);

/// Every x where lines of different slope meet on the envelope, increasing.
std::vector<BreakPoint> breaking_points(const Contour& c);

/// Coefficients beta_i = sum_{l>=i} C(l,i) alpha_l y0^{l-i} of w(y0 + ybar).
SeriesPolynomial recenter(const SeriesPolynomial& p, const PuiseuxSeries& y0);

/// Vertex polynomial of an algebraic breaking point as a dense polynomial in
/// c divided by c^{min B}; nullopt when a coefficient is symbolic.
std::optional<UniPoly> vertex_polynomial(const BreakPoint& b);

/// A root prefix. `series` is exact below its trunc; `residual_bound` is a
/// guaranteed lower bound on v(w(series)); `killed` lists the contour value
/// (the index of beta_0 cancelled) at each construction step.
struct PartialSolution {
  PuiseuxSeries series;
  int multiplicity = 1;
  Valuation residual_bound;
  std::vector<Exponent> killed;
};

/// A vertex polynomial factor with no rational roots.
struct UnresolvedBranch {
  PuiseuxSeries prefix;
  Exponent exponent;
  UniPoly vertex;  // remaining factor (or the whole vertex when symbolic)
  int count = 0;   // roots it accounts for
  bool symbolic = false;
};

struct AlgebraicSolution {
  std::vector<PartialSolution> branches;
  std::vector<UnresolvedBranch> unresolved;

  int root_count() const;
};

/// All roots of p, each continued until v(w(prefix)) >= bound and the next
/// term exponent is >= bound (or the root is exact).
AlgebraicSolution solve_algebraic(const SeriesPolynomial& p, const Exponent& bound);

/// Normalized input: a_0 = 1, a_i = alpha_{N-i}; a_k is the single coefficient
/// with negative valuation, all others have valuation >= 0.
struct ClosedFormInput {
  std::vector<PuiseuxSeries> a;  // a_0 .. a_N
  std::size_t k = 1;
  Coefficient branch;  // chosen root of c^k = leading coefficient of -a_k

  /// Builds the input from w(y); throws std::invalid_argument when the
  /// normalization does not hold.
  static ClosedFormInput from_polynomial(const SeriesPolynomial& p, const Coefficient& branch);
};

/// Explicit root (-a_k)^{1/k} - sum_{i<n_terms} c_i (-a_k)^{-i/k} with
///   c_i = sum_{p=1}^{i+1} 1/(p! k^p) prod_{j=1}^{p-1} (i - jk)
///         sum_{i_1+...+i_p = i+1, 1 <= i_l <= N, i_l != k} a_{i_1} ... a_{i_p}.
/// The result is truncated at n_terms * (-v(a_k)/k).
PuiseuxSeries closed_form_root(const ClosedFormInput& c, std::size_t n_terms);

}  // namespace puiseux
