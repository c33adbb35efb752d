#include "puiseux/cli.hpp"

#include <sstream>

#include "json.hpp"
#include "puiseux/parse.hpp"

namespace puiseux {

using nlohmann::json;

namespace {

constexpr const char* kSchema = "puiseux-report/1";

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::algebraic: return "algebraic";
    case Mode::ode: return "ode";
    case Mode::wfactor: return "wfactor";
    case Mode::verify: return "verify";
  }
  return "?";
}

std::string val(const Valuation& v) { return v.is_infinite() ? "inf" : puiseux::to_string(v.value()); }

json series_json(const PuiseuxSeries& s, const std::string& symbol) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back({puiseux::to_string(e), c.to_string(symbol)});
  return {{"text", s.to_string(symbol)}, {"terms", terms}, {"trunc", val(s.trunc())}};
}

bool symbolic(const PuiseuxSeries& s) { return !s.is_rational(); }

struct Report {
  json j;
  std::ostringstream text;
  int exit_code = exit_ok;
};

void run_algebraic(const JobSpec& job, Report& r) {
  SeriesPolynomial p = parse_algebraic(job.equation);
  AlgebraicSolution sol = solve_algebraic(p, job.bound);
  r.j["degree"] = p.degree();
  r.j["root_count"] = sol.root_count();
  json branches = json::array();
  r.text << "algebraic equation of degree " << p.degree() << ", bound " << puiseux::to_string(job.bound) << "\n";
  int i = 0;
  for (const auto& b : sol.branches) {
    ++i;
    json killed = json::array();
    for (const auto& k : b.killed) killed.push_back(puiseux::to_string(k));
    branches.push_back({{"series", series_json(b.series, "C")},
                        {"multiplicity", b.multiplicity},
                        {"residual_guarantee", val(b.residual_bound)},
                        {"killed", killed}});
    r.text << "branch " << i << " (multiplicity " << b.multiplicity << "): y = " << b.series.to_string()
           << "\n  residual valuation >= " << val(b.residual_bound) << "\n";
  }
  json unresolved = json::array();
  for (const auto& u : sol.unresolved) {
    unresolved.push_back({{"prefix", series_json(u.prefix, "C")},
                          {"exponent", puiseux::to_string(u.exponent)},
                          {"vertex", u.vertex.to_string("c")},
                          {"count", u.count},
                          {"symbolic", u.symbolic}});
    r.text << "unresolved: " << u.count << " root(s) at exponent " << puiseux::to_string(u.exponent)
           << " after prefix " << u.prefix.to_string() << ", vertex factor " << u.vertex.to_string("c") << "\n";
  }
  r.j["branches"] = branches;
  r.j["unresolved"] = unresolved;
  if (!sol.unresolved.empty()) r.exit_code = exit_unresolved;
}

void run_ode(const JobSpec& job, Report& r) {
  auto parsed = parse_ode(job.equation);
  MonomialODE e;
  if (auto* m = std::get_if<MonomialODE>(&parsed)) {
    e = *m;
  } else {
    long order = std::max<long>(4, ceil(job.bound).get_num().get_si() + 2);
    e = expand_rational(std::get<RationalODE>(parsed), order, Valuation(Rational(job.bound + 2)));
    r.j["expanded"] = true;
  }
  SolveResult res = solve_all(e, job.bound, ResonancePolicy{job.resonance_values});
  r.text << "differential equation with " << e.monomials.size() << " monomial(s), bound "
         << puiseux::to_string(job.bound) << "\n";
  json branches = json::array(), params = json::array();
  int constants = 0, i = 0;
  for (const auto& b : res.branches) {
    ++i;
    std::string symbol = "C";
    json parameter = nullptr;
    if (symbolic(b.series)) {
      symbol = "C" + std::to_string(++constants);
      parameter = symbol;
      params.push_back(symbol);
    }
    json coincidence = json::array();
    for (const auto& c : b.coincidence) coincidence.push_back(puiseux::to_string(c));
    auto opt = [](const auto& o, auto f) -> json { return o ? json(f(*o)) : json(nullptr); };
    branches.push_back(
        {{"mu0", puiseux::to_string(b.initial.mu0)},
         {"case", to_string(b.initial.kind)},
         {"mu_r", opt(b.initial.mu_r, [](const Rational& q) { return puiseux::to_string(q); })},
         {"kind", to_string(b.kind)},
         {"status", to_string(b.status)},
         {"series", series_json(b.series, symbol)},
         {"parameter", parameter},
         {"resonance", opt(b.resonance, [](const Rational& q) { return puiseux::to_string(q); })},
         {"free_value", opt(b.free_value, [&](const Coefficient& c) { return c.to_string(symbol); })},
         {"obstruction", opt(b.obstruction, [&](const Coefficient& c) { return c.to_string(symbol); })},
         {"resonance_beyond_bound", b.resonance_beyond_bound},
         {"iterations", b.iterations},
         {"coincidence", coincidence},
         {"residual_guarantee", val(b.residual_guarantee)}});
    r.text << "branch " << i << ": mu0 = " << puiseux::to_string(b.initial.mu0) << ", case "
           << to_string(b.initial.kind);
    if (b.initial.mu_r) r.text << ", mu_r = " << puiseux::to_string(*b.initial.mu_r);
    r.text << ", " << to_string(b.status) << "\n  y = " << b.series.to_string(symbol)
           << "\n  residual valuation >= " << val(b.residual_guarantee) << "\n";
    if (b.obstruction) r.text << "  obstruction " << b.obstruction->to_string(symbol) << "\n";
    if (!b.coincidence.empty()) {
      r.text << "  coincidence";
      for (const auto& c : b.coincidence) r.text << " " << puiseux::to_string(c);
      r.text << "\n";
    }
  }
  json unresolved = json::array();
  for (const auto& u : res.unresolved) {
    unresolved.push_back({{"mu0", puiseux::to_string(u.mu0)},
                          {"s", u.s},
                          {"vertex", u.vertex.to_string("t")},
                          {"reason", u.reason}});
    r.text << "unresolved at mu0 = " << puiseux::to_string(u.mu0) << ": " << u.reason << "\n";
  }
  for (const auto& d : res.diagnostics) r.text << "note: " << d << "\n";
  if (res.zero_solution) r.text << "zero solution: y = 0\n";
  r.j["branches"] = branches;
  r.j["parameters"] = params;
  r.j["unresolved"] = unresolved;
  r.j["diagnostics"] = res.diagnostics;
  r.j["zero_solution"] = res.zero_solution;
  if (!res.unresolved.empty()) r.exit_code = exit_unresolved;
}

std::string expr_text(const Expr& e) {
  auto q = e.as_rational();
  return q ? q->to_string("x") : e.to_string();
}

void run_wfactor(const JobSpec& job, Report& r) {
  IntegralFactorProblem pr = parse_factor_problem(job.equation);
  long mu0 = job.mu0 ? *job.mu0 : (pr.kind() == FactorCase::B ? 0 : -std::max<long>(pr.delta(), 1));
  IntegralFactorSeries w = solve_w(pr, mu0, job.levels);
  json coeffs = json::array(), checks = json::array();
  for (const auto& c : w.w) coeffs.push_back(expr_text(c));
  for (const auto& [level, z] : w.checks) checks.push_back({{"level", level}, {"identity", to_string(z)}});
  r.j["case"] = to_string(w.kind);
  r.j["mu_p"] = pr.mu_p;
  r.j["mu_q"] = pr.mu_q;
  r.j["delta"] = pr.delta();
  r.j["mu0"] = mu0;
  r.j["w"] = coeffs;
  r.j["first_integral"] = w.to_string();
  r.j["checks"] = checks;
  r.j["verified"] = w.verified();
  r.text << "case " << to_string(w.kind) << " (mu_p = " << pr.mu_p << ", mu_q = " << pr.mu_q << "), mu0 = " << mu0
         << "\n";
  for (std::size_t k = 0; k < w.w.size(); ++k) r.text << "w" << k << " = " << expr_text(w.w[k]) << "\n";
  r.text << "first integral: " << w.to_string() << "\n";
  r.text << "levels verified: " << (w.verified() ? "yes" : "no") << " (" << w.checks.size() << " identities)\n";
}

void run_verify(const JobSpec& job, Report& r) {
  FieldODE field = parse_field_ode(job.equation);
  FirstIntegralCandidate cand;
  cand.alpha = parse_expr(job.alpha);
  for (const auto& spec : job.roots) {
    auto colon = spec.rfind(':');
    if (colon == std::string::npos) throw MalformedCandidate("root '" + spec + "' needs the form expr:k");
    cand.roots.push_back(parse_expr(spec.substr(0, colon)));
    try {
      cand.k.push_back(std::stol(spec.substr(colon + 1)));
    } catch (const std::logic_error&) {
      throw MalformedCandidate("bad exponent in '" + spec + "'");
    }
  }
  ConstantCheck check = verify_constant(cand, field);
  json residual = json::array();
  for (const auto& c : check.residual) residual.push_back(expr_text(c));
  r.j["verdict"] = to_string(check.verdict);
  r.j["constant"] = check.holds();
  r.j["residual"] = residual;
  r.text << "candidate is " << (check.holds() ? "" : "not ") << "a first integral (" << to_string(check.verdict)
         << ")\n";
  if (check.verdict == ZeroTest::inconclusive) r.exit_code = exit_unresolved;

  json ghosts = nullptr;
  bool rational_roots = cand.roots.size() >= 2;
  for (const auto& y : cand.roots) rational_roots = rational_roots && y.as_rational().has_value();
  auto parsed = parse_ode(job.equation);
  if (rational_roots && std::holds_alternative<MonomialODE>(parsed)) {
    GhostSet g = ghost_roots(cand, std::get<MonomialODE>(parsed), job.bound);
    ghosts = json::array();
    for (const auto& root : g.roots) {
      ghosts.push_back({{"series", series_json(root.y, "C")},
                        {"multiplicity", root.multiplicity},
                        {"ghost", root.ghost},
                        {"residual", val(root.check.value())},
                        {"threshold", val(root.threshold)}});
      r.text << (root.ghost ? "ghost" : "solution") << ": y = " << root.y.to_string() << " (residual valuation "
             << val(root.check.value()) << ", a solution needs >= " << val(root.threshold) << ")\n";
    }
    if (g.degenerate) r.text << "no ghost roots (constant numerator)\n";
    r.j["degenerate"] = g.degenerate;
  }
  r.j["ghosts"] = ghosts;
}

}  // namespace

std::vector<Rational> parse_resonance_policy(const std::string& text) {
  if (text == "symbolic") return {};
  const std::string prefix = "values=";
  if (text.rfind(prefix, 0) != 0) throw std::invalid_argument("resonance policy must be 'symbolic' or 'values=...'");
  std::vector<Rational> out;
  std::string rest = text.substr(prefix.size());
  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t comma = rest.find(',', start);
    std::string item = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_rational(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

RunResult run(const JobSpec& job) {
  Report r;
  r.j["schema"] = kSchema;
  r.j["mode"] = mode_name(job.mode);
  r.j["input"] = job.equation;
  r.j["bound"] = puiseux::to_string(job.bound);
  if (job.mode == Mode::wfactor) r.j["levels"] = job.levels;
  json error = nullptr;
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    r.exit_code = code;
    error = {{"kind", kind}, {"message", message}};
    r.text.str("");
    r.text << kind << " error: " << message << "\n";
  };
  try {
    switch (job.mode) {
      case Mode::algebraic: run_algebraic(job, r); break;
      case Mode::ode: run_ode(job, r); break;
      case Mode::wfactor: run_wfactor(job, r); break;
      case Mode::verify: run_verify(job, r); break;
    }
  } catch (const ParseError& e) {
    fail(exit_parse, "parse", e.what());
    error["line"] = e.line();
    error["column"] = e.column();
  } catch (const MalformedExpression& e) {
    fail(exit_parse, "parse", e.what());
  } catch (const MalformedCandidate& e) {
    fail(exit_parse, "candidate", e.what());
  } catch (const ClassificationError& e) {
    fail(exit_classification, "classification", e.what());
  } catch (const std::exception& e) {
    fail(exit_classification, "classification", e.what());
  }
  r.j["error"] = error;
  r.j["exit_code"] = r.exit_code;
  RunResult out;
  out.exit_code = r.exit_code;
  out.output = job.json ? r.j.dump(2) + "\n" : r.text.str();
  return out;
}

}  // namespace puiseux
