#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "puiseux/algebraic.hpp"
#include "puiseux/series.hpp"

namespace puiseux {

/// Raised when an operation is applied to an initial term of the wrong kind
/// (a proper-only routine on an algebraic-type term, a lattice with a negative
/// generator, ...).
class ClassificationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bookkeeping left by expand_rational: the monomial form is P/Q expanded in y
/// through y^y_order, with every coefficient cut at x_cap.
struct ExpansionRecord {
  long y_order = 0;
  Valuation x_cap;              // +inf when no coefficient needed cutting
  bool y_exact = false;         // no term beyond y_order exists
  Rational rho;                 // v(q_i/q_0) >= i*rho for the recentred Q
  Rational offset;              // min_j (v(p_j) - j*rho) - v(q_0)

  /// Lower bound on the valuation of everything dropped, for a branch whose
  /// valuation is mu. nullopt when the dropped tail is not bounded below.
  std::optional<Valuation> cap(const Exponent& mu) const;
};

/// dy/dx = sum f x^nu y^sigma with finitely many monomials.
struct MonomialODE {
  std::vector<Monomial> monomials;  // merged, nonzero, sorted by (sigma, nu)
  std::optional<ExpansionRecord> expansion;

  MonomialODE() = default;
  explicit MonomialODE(std::vector<Monomial> m);

  /// Least common denominator of the y exponents.
  long ramification() const;
  Exponent min_nu() const;
};

/// dy/dx = P(y)/Q(y), coefficients listed low degree first, expanded about y0.
struct RationalODE {
  std::vector<PuiseuxSeries> p;
  std::vector<PuiseuxSeries> q;
  PuiseuxSeries y0;
};

enum class InitialCase { a, b, c };
enum class BranchKind { proper, algebraic_type, no_continuation };
enum class BranchStatus { unique, resonant_free, negative_resonance, algebraic_type, no_continuation };

std::string to_string(InitialCase c);
std::string to_string(BranchKind k);
std::string to_string(BranchStatus s);

struct InitialTerm {
  Exponent mu0;
  std::optional<Coefficient> c0;  // nullopt: free
  InitialCase kind = InitialCase::b;
  std::optional<Exponent> mu_r;
  /// Branch of the fractional powers: c0 = root^s.
  std::optional<BranchChoice> branch;
  /// mu0 = 0 with nu_min + 1 = 0: kept only as a diagnostic.
  bool boundary = false;
};

/// Contour of the right-hand side plus the derivative line x - 1 (tag -1).
Contour ode_contour(const MonomialODE& e);

/// Vertex polynomial that produced no usable root.
struct UnresolvedInitial {
  Exponent mu0;
  long s = 1;
  UniPoly vertex;  // in t with c0 = t^s
  std::string reason;
};

struct InitialTerms {
  std::vector<InitialTerm> terms;
  std::vector<UnresolvedInitial> unresolved;
};

/// Every admissible leading term: breaking points (case b), the coincident
/// line mu0 = f (case c) and mu0 = 0 (case a).
InitialTerms initial_terms(const MonomialODE& e);

BranchKind classify(const MonomialODE& e, const InitialTerm& t);

/// Exponents mu0 + N-combinations of the shifts nu + 1 + mu0 (sigma - 1).
struct IndexLattice {
  Exponent offset;
  std::vector<Exponent> generators;  // positive, sorted, distinct
  Valuation bound;
  std::vector<Exponent> elements;    // increasing, all <= bound

  bool contains(const Exponent& e) const;
  /// The lattice with an extra generator (the resonance shift mu_r - mu0).
  IndexLattice widened(const Exponent& shift) const;
  /// Generators that are not sums of other generators.
  std::vector<Exponent> non_decomposable() const;
  /// Non-decomposable generators that occur in some decomposition of target - offset.
  std::vector<Exponent> non_decomposable_for(const Exponent& target) const;
};

IndexLattice index_lattice(const MonomialODE& e, const InitialTerm& t, const Exponent& bound);

struct SolutionBranch {
  InitialTerm initial;
  BranchKind kind = BranchKind::proper;
  PuiseuxSeries series;
  BranchStatus status = BranchStatus::unique;
  std::optional<Exponent> resonance;       // where the free constant sits or the obstruction arose
  std::optional<Coefficient> free_value;   // value (or symbol) of the free constant
  std::optional<Coefficient> obstruction;  // nonzero at a negative resonance
  bool resonance_beyond_bound = false;
  int iterations = 0;                      // algebraic-type rounds after the first solve
  std::vector<Exponent> coincidence;       // measured residual valuation per round
  Valuation residual_guarantee;
};

/// Coefficient-by-coefficient continuation of a proper initial term. `value`
/// fixes the free constant (c0 in cases a and c, c_r at a resonance); without
/// it the symbol C is used.
SolutionBranch continue_proper(const MonomialODE& e, const InitialTerm& t, const Exponent& bound,
                               const std::optional<Coefficient>& value = std::nullopt);

struct SolveResult {
  std::vector<SolutionBranch> branches;
  std::vector<UnresolvedInitial> unresolved;
  std::vector<std::string> diagnostics;
  bool zero_solution = false;
};

/// Iterated algebraic solves for an algebraic-type term; every round extends
/// exactness by mu0 - 1 - f(mu0).
SolveResult solve_algebraic_type(const MonomialODE& e, const InitialTerm& t, const Exponent& bound);

/// s * 2^((sigma_max - sigma_min) s - 1): the bound on algebraic-type continuations.
Rational algebraic_branch_bound(const MonomialODE& e);

struct ResonancePolicy {
  /// Empty: one branch with the symbolic constant C. Otherwise one branch per value.
  std::vector<Rational> values;
};

SolveResult solve_all(const MonomialODE& e, const Exponent& bound, const ResonancePolicy& policy = {});

/// P(y + y0)/Q(y + y0) - y0' as a monomial form through y^y_order; the
/// coefficients are cut at x_cap when 1/Q(y0) is an infinite series.
MonomialODE expand_rational(const RationalODE& e, long y_order, const Valuation& x_cap = Valuation::infinity());

/// y' - f(y) for the branch series. `support` is the least exponent of a known
/// term (+inf if none); the residual is only known below `trunc`.
struct ResidualReport {
  Valuation support;
  Valuation trunc;
  Valuation value() const { return min(support, trunc); }
  bool exact() const { return support.is_infinite() && trunc.is_infinite(); }
};

ResidualReport residual(const MonomialODE& e, const PuiseuxSeries& y, const std::optional<BranchChoice>& branch,
                        const Valuation& cap = Valuation::infinity());
ResidualReport verify_branch(const MonomialODE& e, const SolutionBranch& b);

}  // namespace puiseux
