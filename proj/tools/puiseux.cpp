#include <iostream>

#include "CLI11.hpp"
#include "puiseux/cli.hpp"

using namespace puiseux;

int main(int argc, char** argv) {
  CLI::App app{"Puiseux series solutions of algebraic and first-order differential equations"};
  app.require_subcommand(1);

  JobSpec job;
  std::string bound = "4";
  std::string resonance = "symbolic";
  long mu0 = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("equation", job.equation, "Equation text")->required();
    sub->add_option("--bound", bound, "Exponent bound (rational, e.g. 9/2)");
    sub->add_flag("--json", job.json, "Emit a JSON report");
  };

  auto* alg = app.add_subcommand("algebraic", "Roots of a polynomial equation in y over Puiseux series");
  common(alg);

  auto* ode = app.add_subcommand("ode", "Series solutions of dy/dx = f(x, y)");
  common(ode);
  ode->add_option("--resonance", resonance, "Free constant policy: symbolic or values=v1,v2,...");

  auto* wf = app.add_subcommand("wfactor", "First integral series for dy/dx = P/Q (input 'P=...; Q=...')");
  common(wf);
  wf->add_option("--levels", job.levels, "Number of coefficients w_k")->check(CLI::Range(1L, 64L));
  auto* mu0_opt = wf->add_option("--mu0", mu0, "Leading exponent in y of the first integral");

  auto* ver = app.add_subcommand("verify", "Check a candidate first integral alpha * prod (y - y_l)^k_l");
  common(ver);
  ver->add_option("--alpha", job.alpha, "Prefix tower expression for alpha");
  ver->add_option("--root", job.roots, "Root and exponent as expr:k (repeatable)");

  try {
    app.parse(argc, argv);
    if (alg->parsed()) job.mode = Mode::algebraic;
    if (ode->parsed()) job.mode = Mode::ode;
    if (wf->parsed()) job.mode = Mode::wfactor;
    if (ver->parsed()) job.mode = Mode::verify;
    job.bound = parse_rational(bound);
    job.resonance_values = parse_resonance_policy(resonance);
    if (*mu0_opt) job.mu0 = mu0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  }

  RunResult r = run(job);
  (r.exit_code == exit_ok || r.exit_code == exit_unresolved ? std::cout : std::cerr) << r.output;
  return r.exit_code;
}
