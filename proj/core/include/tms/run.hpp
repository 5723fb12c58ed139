#pragma once

// Subcommand implementations: evolve, check, convergence, decay.
// Each returns the process exit code: 0 ok, 2 coercivity lost, 1 error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tms/config.hpp"
#include "tms/decay.hpp"
#include "tms/driver.hpp"

namespace tms {

/// Environment variable that overrides SimConfig::output_dir.
inline constexpr const char* kOutputDirVariable = "TMS_OUTPUT_DIR";

std::filesystem::path resolve_output_dir(const SimConfig& config);

/// Initial state of a configured run (realized family or snapshot file).
FieldState initial_state(const SimConfig& config);

DriverOptions driver_options(const SimConfig& config);

struct EvolveRun {
  int exit_code = 0;
  EvolveResult result;
  std::filesystem::path output_dir;
};

/// Writes norms.csv, monitors.csv, snapshots/snap_NNNNNN.tmsb and
/// run_manifest.txt under the output directory.
EvolveRun run_evolve(const SimConfig& config, std::ostream& log);

/// Prints one line per check; exit 0 iff every check passes.
int run_check(const std::string& suite, std::uint64_t seed, std::ostream& out);

struct ConvergenceReport {
  std::string mode;  // "exact" (exact-solution errors) or "self"
  bool exact_to_roundoff = false;
  std::vector<int> points;
  std::vector<double> errors;             // per resolution, or per consecutive pair for "self"
  std::vector<double> orders;             // log2 of consecutive error ratios
  std::vector<double> residuals;          // divergence residual at t_final, per resolution
  std::vector<double> residual_orders;
};

/// Evolves at N, 2N (and 4N for refinements = 3) to t_final. Null-wave and
/// linear-plane data are compared with the exact solution; other data by
/// three-grid self-convergence on the coarse points.
ConvergenceReport run_convergence(const SimConfig& config, int refinements, std::ostream& out);

struct DecayReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double target = 0.0;
  PowerLawFit N1;
  bool has_df = false;
  PowerLawFit df;  // sup |d f|
  bool verdict = false;
};

/// Accepted exponent window for dimension n around -(n-1)/2.
std::pair<double, double> decay_window(int n);

/// Evolves (t_final >= 40), then fits N1 over [t_final/4, t_final].
DecayReport run_decay(const SimConfig& config, std::ostream& out, int* exit_code = nullptr);

/// Fit only, from an existing norms.csv (columns t and N1); n sets the target.
DecayReport fit_norms_csv(const std::filesystem::path& csv, int n, std::ostream& out);

/// Reads named numeric columns of a CSV with a header row.
std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& csv,
                                                  const std::vector<std::string>& names);

}  // namespace tms
