#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "ermakov/invariant_eqs.hpp"

namespace ermakov::cli {

/// Schema violation in a spec file; the message carries the field path.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Run options read from the spec file (command flags may override some).
struct RunConfig {
  std::optional<std::array<double, 3>> acoeffs;  // quadratic-form coefficients
  std::optional<std::array<double, 3>> ic;       // x0, v0, t0
  std::optional<std::array<double, 2>> range;    // t0, t1
  int samples = 101;
  double rtol = 1e-10;
  double atol = 1e-12;
};

struct ParsedSpec {
  EquationSpec eq;
  RunConfig cfg;
};

/// Parses and validates a JSON spec. Top-level keys: family, basis, acoeffs,
/// H, n, H0, q, k, r, ic, range, samples, tolerances. Unknown keys are
/// rejected. H is {"poly":[h0,h1,h2,h3]} or one of the named constants
/// "zero", "ep(c)", "emden(l)". The damping r is "zero" or "const(c)".
/// Throws SpecError on schema problems; family constructors may throw
/// std::invalid_argument for parameter violations.
ParsedSpec parse_spec_text(const std::string& text);
ParsedSpec parse_spec(const std::string& path);

/// Command-line overrides applied on top of the spec's run options.
struct CliOverrides {
  std::string out_dir = ".";
  std::optional<double> rtol;
  std::optional<double> atol;
  std::optional<int> grid;  // replaces the spec's sample count
};

/// Executes one subcommand end to end and reports through the two streams.
/// Commands: solve, verify-symmetry, first-integral, linearize, reduce,
/// catalog. Data files land in out_dir (written atomically); catalog prints
/// to `out` only. Returns the process exit code: 0 success, 1 invalid input,
/// 2 numerical failure or singularity. Never throws.
int run_command(const std::string& command, const std::string& spec_path,
                const CliOverrides& ov, std::ostream& out, std::ostream& err);

}  // namespace ermakov::cli
