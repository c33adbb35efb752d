#pragma once

#include <optional>
#include <string>
#include <vector>

#include "puiseux/rational.hpp"

namespace puiseux {

enum class Mode { algebraic, ode, wfactor, verify };

/// Process exit codes.
enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_parse = 2, exit_classification = 3, exit_unresolved = 4 };

struct JobSpec {
  Mode mode = Mode::algebraic;
  std::string equation;
  Rational bound = 4;
  long levels = 4;
  /// Empty: the free constant stays symbolic.
  std::vector<Rational> resonance_values;
  /// wfactor: leading exponent of the first integral in y (default chosen
  /// from the case).
  std::optional<long> mu0;
  /// verify: alpha in the prefix tower syntax and roots `expr:k`.
  std::string alpha = "1";
  std::vector<std::string> roots;
  bool json = false;
};

struct RunResult {
  int exit_code = exit_ok;
  std::string output;  // text or JSON, newline terminated
};

/// Parses `symbolic` or `values=v1,v2,...`; throws std::invalid_argument.
std::vector<Rational> parse_resonance_policy(const std::string& text);

/// Runs one job; never throws. Errors are reported in the output with the
/// matching exit code.
RunResult run(const JobSpec& job);

}  // namespace puiseux
