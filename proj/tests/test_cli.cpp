#include "doctest.h"

#include "json.hpp"
#include "puiseux/cli.hpp"
#include "puiseux/parse.hpp"
#include "support.hpp"

using namespace puiseux;
using nlohmann::json;
using puiseux::testing::Q;
using puiseux::testing::S;

namespace {

JobSpec job(Mode mode, const std::string& equation, Rational bound = 4) {
  JobSpec j;
  j.mode = mode;
  j.equation = equation;
  j.bound = bound;
  j.json = true;
  return j;
}

json report(const JobSpec& j, int expected_exit = exit_ok) {
  RunResult r = run(j);
  CHECK(r.exit_code == expected_exit);
  json out = json::parse(r.output);
  CHECK(out["schema"] == "puiseux-report/1");
  CHECK(out["exit_code"] == expected_exit);
  return out;
}

}  // namespace

TEST_CASE("ode report for y' = y/x + x") {
  json r = report(job(Mode::ode, "dy/dx = y/x + x"));
  REQUIRE(r["branches"].size() == 2);
  const json& free = r["branches"][0];
  CHECK(free["mu0"] == "1");
  CHECK(free["status"] == "ResonantFree");
  CHECK(free["parameter"] == "C1");
  CHECK(free["resonance"] == "1");
  CHECK(free["series"]["text"] == "(C1)*x^(1) + 1*x^(2)");
  CHECK(r["branches"][1]["series"]["text"] == "1*x^(2)");
  CHECK(r["parameters"] == json::array({"C1"}));
  CHECK(r["error"].is_null());

  JobSpec fixed = job(Mode::ode, "dy/dx = y/x + x");
  fixed.resonance_values = parse_resonance_policy("values=1,-3/2");
  json rf = report(fixed);
  REQUIRE(rf["branches"].size() == 3);
  CHECK(rf["branches"][1]["series"]["text"] == "-3/2*x^(1) + 1*x^(2)");
  CHECK(rf["parameters"].empty());
}

TEST_CASE("algebraic report for y^2 - y + x") {
  json r = report(job(Mode::algebraic, "y^2 - y + x = 0", Q(9, 2)));
  REQUIRE(r["branches"].size() == 2);
  CHECK(r["root_count"] == 2);
  // The small root is the Catalan generating series x + x^2 + 2x^3 + 5x^4.
  PuiseuxSeries small = S(r["branches"][1]["series"]["text"].get<std::string>());
  CHECK(small == S("1*x^(1) + 1*x^(2) + 2*x^(3) + 5*x^(4) + O(x^(5))"));
  for (const auto& b : r["branches"]) CHECK(b["residual_guarantee"] == "5");
}

TEST_CASE("wfactor report for P = y^2, Q = 1") {
  JobSpec j = job(Mode::wfactor, "P=y^2; Q=1");
  j.levels = 3;
  json r = report(j);
  CHECK(r["case"] == "A");
  CHECK(r["mu0"] == -1);
  CHECK(r["w"] == json::array({"1", "x", "0"}));
  CHECK(r["first_integral"] == "y^(-1) + x");
  CHECK(r["verified"] == true);

  JobSpec b = job(Mode::wfactor, "P=1; Q=y");
  json rb = report(b);
  CHECK(rb["case"] == "B");
  CHECK(rb["mu0"] == 0);
}

TEST_CASE("verify report") {
  JobSpec j = job(Mode::verify, "dy/dx = x^(-2)*y^2");
  j.alpha = "{1/x}";
  j.roots = {"0:-1", "x:1"};
  json r = report(j);
  CHECK(r["verdict"] == "zero");
  CHECK(r["degenerate"] == true);

  j.alpha = "1";
  j.roots = {"0:1", "x:1"};
  json g = report(j);
  CHECK(g["verdict"] == "nonzero");
  REQUIRE(g["ghosts"].size() == 1);
  CHECK(g["ghosts"][0]["ghost"] == true);
  CHECK(g["ghosts"][0]["series"]["text"] == "1/2*x^(1)");
}

TEST_CASE("exit codes") {
  json p = report(job(Mode::algebraic, "y^2 - 1.5*x"), exit_parse);
  CHECK(p["error"]["kind"] == "parse");
  CHECK(p["error"]["line"] == 1);
  CHECK(p["error"]["column"] == 7);

  JobSpec bad_root = job(Mode::verify, "dy/dx = y");
  bad_root.roots = {"0"};
  report(bad_root, exit_parse);

  JobSpec wrong_case = job(Mode::wfactor, "P=y^2; Q=1");
  wrong_case.mu0 = 0;
  CHECK(report(wrong_case, exit_classification)["error"]["kind"] == "classification");

  CHECK_THROWS_AS(parse_resonance_policy("sometimes"), std::invalid_argument);
  CHECK(parse_resonance_policy("symbolic").empty());
  CHECK(parse_resonance_policy("values=2/3") == std::vector<Rational>{Q(2, 3)});

  JobSpec text = job(Mode::algebraic, "y^2 - (x");
  text.json = false;
  RunResult t = run(text);
  CHECK(t.exit_code == exit_parse);
  CHECK(t.output.rfind("parse error:", 0) == 0);
}

TEST_CASE("reports are deterministic") {
  std::vector<JobSpec> jobs{job(Mode::ode, "dy/dx = y/x + x"), job(Mode::algebraic, "y^3 - x*y + x^2", Q(3)),
                            job(Mode::ode, "dy/dx = x^(-2)*y^2 - x^(-1)", Q(3)), job(Mode::wfactor, "P=y^2; Q=1")};
  for (auto j : jobs) {
    for (bool as_json : {true, false}) {
      j.json = as_json;
      std::string first = run(j).output;
      for (int i = 0; i < 3; ++i) CHECK(run(j).output == first);
    }
  }
}
