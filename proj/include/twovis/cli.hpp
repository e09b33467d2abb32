#pragma once

// Library side of the `twovis` command-line tool: state documents, sweep
// rows and CSV, the random-state verification suite and command dispatch.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twovis/optimize.hpp"

namespace twovis::cli {

enum ExitCode : int { kSuccess = 0, kUsage = 1, kVerificationFailed = 2, kNumericFailure = 3 };

/// Malformed command line or state document.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// A state document: exactly one of the two fields is set.
///   {"amplitudes": [[re, im], [re, im], [re, im], [re, im]]}
///   {"schmidt_lambda0": 0.75}
struct StateSpec {
  std::optional<std::vector<Complex<double>>> amplitudes;
  std::optional<double> schmidt_lambda0;
};

StateSpec parse_state_spec(std::string_view text);
State to_state(const StateSpec& spec);

struct SweepRow {
  double lambda0 = 0;
  double v1 = 0;
  double v12 = 0;
  double w12_tilde = 0;
  double w12 = 0;
  double sum_sq_tilde = 0;
  double sum_sq_w = 0;
};

inline constexpr std::string_view kSweepHeader = "lambda0,v1,v12,w12_tilde,w12,sum_sq_tilde,sum_sq_w";

/// n >= 2 uniformly spaced values covering [0.5, 1] inclusive.
std::vector<double> lambda0_grid(int n_points);

SweepRow sweep_row(double lambda0);
SweepRow sweep_row(double lambda0, const OptimizerConfig& cfg);
SweepRow sweep_row(const VisibilityReport<double>& report, double lambda0);

/// Header plus one line per row, 12 significant digits.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct VerifyOptions {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  bool numeric = false;
  OptimizerConfig cfg;
};

struct VerifySummary {
  std::size_t states = 0;
  std::size_t checks_passed = 0;
  std::size_t checks_failed = 0;
  double worst_identity = 0;        // max |v1^2 + v12^2 - 1|
  double min_residual_tilde = 0;    // min v1^2 + w12_tilde^2 - 1
  double max_residual_w = 0;        // max v1^2 + w12^2 - 1
  double worst_eigenvalues = 0;     // max |closed - numeric| spectrum of rho - rho_sep
  double worst_bound_margin = 0;    // min of (w12_tilde - C, C - w12)
  double worst_numeric = 0;         // max |closed - numeric| for v1, w12_tilde, w12
  double worst_numeric_v12 = 0;     // max |C - v12_numeric_local|
  std::vector<std::string> failures;  // one line per failing state
  bool passed() const { return checks_failed == 0; }
};

VerifySummary verify(const VerifyOptions& options);

/// Runs the tool. Returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace twovis::cli
