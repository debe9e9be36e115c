#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "osqse/io.hpp"

namespace osqse::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kMissingRoles = 3,
  kUnwritablePath = 4,
  kScriptError = 5,
  kExampleFailed = 6,
};

inline constexpr const char* kReportSchema = "osqse.run-report/1";

struct Options {
  std::string state;
  std::string pair;  // empty: command default
  std::optional<double> tol;
  std::uint64_t seed = SolverConfig{}.seed;
  std::string out;

  // curve
  double alpha_min = 0;
  double alpha_max = 10;
  std::size_t points = 500;
  // check-zero
  std::string method = "both";
  std::string sidecar;
  std::size_t restarts = SolverConfig{}.restarts;
  // simulate
  std::string protocol;
  // examples
  std::string example = "all";
};

/// Each command prints a RunReport to `out`, diagnostics to `err`, and
/// returns an ExitCode.
int cmd_bound(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_curve(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_check_zero(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err);
int cmd_examples(const Options& opt, std::ostream& out, std::ostream& err);

/// One asserted claim about a built-in state.
struct Check {
  std::string claim;
  std::string expected;
  std::string actual;
  bool pass = false;
};

std::vector<Check> example_checks(const std::string& name);

/// Evenly spaced orders from `lo` to `hi` followed by ∞.
RenyiCurve sample_curve(const PureState& state, double lo, double hi, std::size_t points);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace osqse::cli
