#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sigmalab/geometry.hpp"
#include "sigmalab/report.hpp"

namespace sigmalab::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNumericalError = 3,
  kHypothesisFailure = 4,
  kVerificationFailure = 5,
};

struct DomainConfig {
  std::string kind = "disk";  // disk | annulus | rectangle
  Point2 center{0.0, 0.0};
  double radius = 1.0;
  double r_in = 0.2;
  double r_out = 1.0;
  Point2 corner{0.0, 0.0};
  double width = 1.0;
  double height = 1.0;
};

struct RunConfig {
  std::string command;
  DomainConfig domain;
  double h = 0.05;
  double spacing = 0.02;
  int refinements = 0;
  std::string sigma = "identity";
  std::string g = "x1";
  std::string solver = "fem";  // fem | fd
  std::string drift = "div";   // fd drift: div (of sigma) | zero
  double alpha = 2.0;
  double margin = 0.1;
  int directions = 8;
  std::vector<Point2> probes;
  int probe_count = 5;
  double probe_radius_fraction = 0.5;
  double tie_tolerance = 1e-12;
  double rel_tol = 0.05;
  bool allow_multiply_connected = false;
  std::string values;  // unimodal: whitespace-separated numbers instead of a boundary trace
  std::string out = "out";
  std::uint64_t seed = 1;
  bool svg = true;
  int levels = 12;
};

const std::vector<std::string>& command_names();

/// Defaults that differ per command (meyers runs on an annulus, for instance).
RunConfig defaults_for(const std::string& command);

/// Overlays the keys present in `j` onto `base`; unknown keys are errors.
RunConfig merge_json(RunConfig base, const Json& j);
/// Resolved configuration, without the output directory.
Json to_json(const RunConfig& config);
void validate(const RunConfig& config);

/// Runs one command, writing its files into config.out only on success
/// (a failed run leaves no files behind). Returns the exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point: parse flags, merge --config, run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sigmalab::cli
