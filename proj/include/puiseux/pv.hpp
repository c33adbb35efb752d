#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "puiseux/algebraic.hpp"
#include "puiseux/liouville.hpp"
#include "puiseux/ode.hpp"

namespace puiseux {

/// Polynomial in y over Q(x), low degree first.
using YPolynomial = std::vector<RationalFunction>;

/// dy/dx = P(y)/Q(y) with P, Q polynomials in y over Q(x).
struct FieldODE {
  YPolynomial p;
  YPolynomial q;

  /// Requires integer exponents; negative powers of y are cleared into Q.
  static FieldODE from(const MonomialODE& e);
  /// Requires exact coefficients with integer exponents.
  static FieldODE from(const RationalODE& e);
};

/// P_y + dQ/dx: zero exactly when the form Q dx-direction is already closed.
YPolynomial closedness_defect(const FieldODE& e);

/// The coefficient -(P_y + dQ/dx)/Q of the linear equation f' = coeff * f
/// for an integrating factor (unique up to a multiplicative constant).
struct IntegratingFactorEquation {
  YPolynomial numerator;    // -(P_y + dQ/dx)
  YPolynomial denominator;  // Q
  /// The quotient when it is a polynomial in y.
  std::optional<YPolynomial> polynomial() const;
};

IntegratingFactorEquation integrating_factor_equation(const FieldODE& e);

enum class FactorCase { A, B };
std::string to_string(FactorCase c);

/// Case A when mu_q + 1 <= mu_p, case B otherwise.
FactorCase factor_case(long mu_p, long mu_q);

/// P = sum p_i y^(mu_p + i), Q = sum q_j y^(mu_q + j) with p_0 != 0 and
/// q_0 = 1.
struct IntegralFactorProblem {
  long mu_p = 0;
  long mu_q = 0;
  std::vector<RationalFunction> p;
  std::vector<RationalFunction> q;

  /// Strips leading zeros and divides P and Q by q_0 (same equation).
  /// Throws std::invalid_argument when P or Q is zero.
  static IntegralFactorProblem make(long mu_p, std::vector<RationalFunction> p, long mu_q,
                                    std::vector<RationalFunction> q);
  static IntegralFactorProblem from(const FieldODE& e);

  long delta() const { return mu_p - mu_q - 1; }
  long gamma() const { return mu_q + 1 - mu_p; }
  FactorCase kind() const { return factor_case(mu_p, mu_q); }
  RationalFunction p_at(long i) const;
  RationalFunction q_at(long j) const;
};

/// w = sum_k w_k y^(mu0 + k) with w_x Q + w_y P = 0 level by level.
struct IntegralFactorSeries {
  long mu0 = 0;
  FactorCase kind = FactorCase::A;
  std::vector<Expr> w;
  /// Level index L and the zero test of its identity after differentiation.
  std::vector<std::pair<long, ZeroTest>> checks;

  bool verified() const;
  /// Infix text of the truncated first integral.
  std::string to_string() const;
};

/// Coefficient of y^(mu0 + mu_q + level) in w_x Q + w_y P, over the computed w.
Expr level_identity(const IntegralFactorProblem& pr, long mu0, const std::vector<Expr>& w, long level);

/// Computes w_0 .. w_{levels-1}. Case A requires mu0 != 0, case B mu0 = 0;
/// throws std::invalid_argument otherwise.
IntegralFactorSeries solve_w(const IntegralFactorProblem& pr, long mu0, long levels);

/// alpha * prod (y - y_l)^(k_l).
struct FirstIntegralCandidate {
  Expr alpha;
  std::vector<Expr> roots;
  std::vector<long> k;
};

class MalformedCandidate : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Derivative of the candidate along the equation, multiplied by
/// Q prod (y - y_l) / F: a polynomial in y over the tower.
struct ConstantCheck {
  ZeroTest verdict = ZeroTest::inconclusive;
  std::vector<Expr> residual;  // coefficients in y, low degree first
  bool holds() const { return verdict == ZeroTest::zero; }
};

ConstantCheck verify_constant(const FirstIntegralCandidate& cand, const FieldODE& e);

/// Laurent expansion at x = 0 of a tower element without tower nodes.
PuiseuxSeries to_series(const Expr& e, const Valuation& cap);

struct GhostRoot {
  PuiseuxSeries y;
  long multiplicity = 1;
  ResidualReport check;
  /// Exponent below which a true solution has no residual term.
  Valuation threshold;
  bool ghost = true;
};

/// Checks y against the equation: a ghost is a root whose residual has a
/// known term below the threshold a true solution would guarantee.
GhostRoot classify_root(const MonomialODE& e, const PuiseuxSeries& y);

struct GhostSet {
  std::vector<GhostRoot> roots;
  std::vector<UnresolvedBranch> unresolved;
  /// The cleared numerator sum_l k_l prod_{m != l} (y - y_m) has no roots.
  bool degenerate = false;
  std::size_t ghost_count() const;
};

/// Roots in y of sum_l k_l prod_{m != l} (y - y_m), each checked against the
/// equation. Requires at least two distinct roots.
GhostSet ghost_roots(const std::vector<PuiseuxSeries>& roots, const std::vector<long>& k, const MonomialODE& e,
                     const Exponent& bound);
GhostSet ghost_roots(const FirstIntegralCandidate& cand, const MonomialODE& e, const Exponent& bound);

/// Riccati equation y' = y^2 + b y + a and its linear companion
/// z'' - b z' + a z = 0 under y = -z'/z.
struct RiccatiReport {
  Expr y;
  Expr riccati_residual;  // y' - y^2 - b y - a
  Expr linear_residual;   // z'' - b z' + a z
  ZeroTest riccati = ZeroTest::inconclusive;
  ZeroTest linear = ZeroTest::inconclusive;
  /// riccati_residual + linear_residual / z, which must vanish.
  ZeroTest identity = ZeroTest::inconclusive;
};

Expr riccati_residual(const Expr& a, const Expr& b, const Expr& y);
Expr linear_residual(const Expr& a, const Expr& b, const Expr& z);
/// Throws MalformedExpression when z is structurally zero.
RiccatiReport riccati_bridge(const Expr& a, const Expr& b, const Expr& z);
/// The solution -(c z2' + z1')/(c z2 + z1) of the Riccati equation through
/// two solutions of the linear one (the root of the first factor of the
/// algebraic set; c = infinity gives -z2'/z2).
Expr riccati_member(const Expr& z1, const Expr& z2, const Rational& c);

}  // namespace puiseux
