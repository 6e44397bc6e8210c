#ifndef AMHD_CONFIG_HPP
#define AMHD_CONFIG_HPP

#include "amhd/solver.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace amhd {

/// Raised for any bad configuration value; `field` names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  Model model = Model::mhd;
  int nx = 32;
  int ny = 32;
  double ly = 1.0;
  double nu = 0.1;
  double eta = 0.1;
  double dt = 1e-3;
  double t_end = 1.0;
  long record_every = 10;
  InitialKind init = InitialKind::random_band;
  double amplitude = 1.0;
  /// Unset means: 0 for single_mode, equal to `amplitude` otherwise.
  std::optional<double> w_amplitude;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  int mode_x = 1;
  int mode_y = 0;
  double bandwidth = 3.0;
  std::string output_dir = "out";
  long snapshot_every = 0;
  std::vector<double> sobolev_s;
  double cfl = 0.5;

  /// Throws ConfigError on the first invalid field.
  void validate() const;

  /// Sets one key from its text form (the same syntax as the config file).
  void set(const std::string& key, const std::string& value);

  ModelParams<double> params() const { return {model, nu, eta}; }
  InitialDataSpec<double> initial_spec() const;
  Grid<double> grid() const { return {nx, ny, ly}; }

  /// Fully resolved key=value text; parses back to an identical config.
  std::string to_text() const;
};

/// key = value lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Keys accepted as sweep axes.
std::vector<std::string> numeric_config_keys();

}  // namespace amhd

#endif  // AMHD_CONFIG_HPP
