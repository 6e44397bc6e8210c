#ifndef AMHD_EXPERIMENT_HPP
#define AMHD_EXPERIMENT_HPP

// Command implementations behind the `amhd` executable. Each returns the
// process exit code and writes human-readable output to the given streams.

#include "amhd/config.hpp"

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace amhd {

inline constexpr const char* software_version = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int numerical = 2;
inline constexpr int check_failed = 3;
}  // namespace exit_code

/// Outcome of one configured simulation (used by run and sweep).
struct RunOutcome {
  int exit = exit_code::ok;
  std::string message;  ///< failure reason, empty on success
  double final_energy = 0;
  double final_energy_tilde = 0;
  double fitted_rate = 0;  ///< NaN when the trajectory is too short to fit
  double f_ratio = 0;      ///< F(T) / F(0), NaN when F(0) = 0
};

/// Runs `config` and writes diagnostics.csv, run.meta and snapshots under config.output_dir.
RunOutcome run_experiment(const RunConfig& config);

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);

/// Worker cap from AMHD_WORKERS (default: hardware concurrency, at least 1).
unsigned sweep_workers();

int cmd_sweep(const std::string& config_path, const std::string& axis, const std::vector<std::string>& values,
              std::ostream& out, std::ostream& err);

/// Parses "t0:t1"; throws std::invalid_argument on malformed text.
std::pair<double, double> parse_window(const std::string& text);

int cmd_fit(const std::string& csv_path, const std::string& column, const std::string& window, std::ostream& out,
            std::ostream& err);

enum class VerifyLevel { fast, full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::fast;
  /// Names of checks whose implementation is replaced by a deliberately broken one.
  std::set<std::string> faults;
};

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool passed = false;
};

std::vector<CheckResult> run_checks(const VerifyOptions& options);

int cmd_verify(const VerifyOptions& options, std::ostream& out);

}  // namespace amhd

#endif  // AMHD_EXPERIMENT_HPP
