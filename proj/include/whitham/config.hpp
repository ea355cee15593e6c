#pragma once

// Run configuration: defaults, flat key = value files and validation.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace whitham {

enum class Command { Bifurcate, Spectrum, Evolve, BranchPoint, Sample };

std::string_view to_string(Command command);
/// Throws ConfigError for an unknown command name.
Command parse_command(std::string_view name);

struct RunConfig {
  Command command = Command::Bifurcate;
  std::string model = "ej";
  double kappa = 1.0;
  int n0 = 1;

  // continuation
  int n_points = 256;
  double h = 1e-3;
  double eps0 = 1e-5;
  int max_steps = 200000;
  std::optional<double> max_height;
  double bound_standoff = 1e-3;
  double newton_tol = 1e-10;
  int newton_max_iterations = 25;

  // wave selection for spectrum / evolve / sample
  std::optional<double> height;
  std::vector<double> heights;
  std::string height_measure = "primary";

  // stability
  int n_modes = 50;
  double dmu = 1.0 / 500.0;
  double mu_max = 1.0;
  double tol_grow = 1e-6;
  double r_origin = 0.05;
  double mu_mod = 0.1;
  double kernel_radius = 1e-3;

  // evolution
  double dt = 1e-3;
  double periods = 1.0;
  std::optional<double> t_final;
  /// Collocation points of the wave handed to the evolution (0: n_points).
  int evolve_points = 0;
  int substeps = 1;
  int snapshot_every = 100;
  double tail_fraction = 0.25;
  bool dump_state = false;

  int workers = 1;
  std::string output_dir;
};

/// Defaults for a command; the HP continuation stops at height 3.
RunConfig default_config(Command command, std::string_view model = "ej");

/// Accepted keys, in the order they are written back.
const std::vector<std::string>& config_keys();

/// Sets one key from its text value. Throws ConfigError for an unknown key
/// (listing the accepted ones) or an unparsable value.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment; blank lines ignored.
/// Throws IoError if the file cannot be read, ConfigError on bad lines.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

/// Defaults for the command and model, then file settings, then flag
/// settings, then validation.
RunConfig resolve_config(Command command,
                         const std::vector<std::pair<std::string, std::string>>& file_settings,
                         const std::vector<std::pair<std::string, std::string>>& flag_settings);

/// Range checks; throws ConfigError.
void validate(const RunConfig& config);

/// Every key with its resolved value, as round-trip text.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

}  // namespace whitham
