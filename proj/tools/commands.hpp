#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsector/measure.hpp"

namespace qsector::cli {

// Stable exit-code contract.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kNotConverged = 2,
  kBoundViolation = 3,
};

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> measures;
  int q = 2;
  std::vector<int> exponents;
  int grid = 256;
  int starts = 32;
  std::optional<std::uint64_t> seed;
  double tol = 1e-6;
  double bound_slack = 1e-6;
  std::string out;
  std::string coeffs_out;
  std::string profile_out;

  // verify / adversarial
  int n = 1;
  double r = 100.0;
  double delta = 1e-3;

  // scan: either an apex (d = 1) or a full configuration
  std::optional<Complex> apex;
  std::vector<Complex> a;
  std::optional<Complex> b;

  // fan6 / certify
  int scan_points = 720;
  double sweep_extent = 0.0;
  int sweep_points = 0;

  // tailsum
  std::int64_t terms = 10'000'000;

  std::vector<std::string> argv;
};

/// Checks the config against the subcommand's preconditions; throws std::invalid_argument.
void validate(const RunConfig& cfg);

int cmd_solve(const RunConfig& cfg, std::ostream& out);
int cmd_verify(const RunConfig& cfg, std::ostream& out);
int cmd_scan(const RunConfig& cfg, std::ostream& out);
int cmd_fan6(const RunConfig& cfg, std::ostream& out);
int cmd_adversarial(const RunConfig& cfg, std::ostream& out);
int cmd_certify(const RunConfig& cfg, std::ostream& out);
int cmd_tailsum(const RunConfig& cfg, std::ostream& out);

/// Dispatches on cfg.subcommand; input errors are reported on `err` and mapped to exit 1.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (CLI11) and runs.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

/// "re,im" -> complex.
Complex parse_complex(const std::string& text);

}  // namespace qsector::cli
