#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "whitham/config.hpp"
#include "whitham/run.hpp"

using namespace whitham;

namespace {

std::string flag_name(std::string key) {
  for (char& ch : key) {
    if (ch == '_') ch = '-';
  }
  return "--" + key;
}

const std::map<std::string, std::string> option_help = {
    {"model", "ej | ej-positive | hp | bw"},
    {"kappa", "wavenumber (period 2 pi / kappa)"},
    {"n0", "mode of the ej-positive bifurcation"},
    {"n_points", "collocation points on the half period"},
    {"h", "arclength step"},
    {"eps0", "seed amplitude"},
    {"max_steps", "continuation step limit"},
    {"max_height", "stop once the height passes this"},
    {"bound_standoff", "relative distance to the ej amplitude bound at which to stop"},
    {"newton_tol", "corrector residual tolerance"},
    {"newton_max_iterations", "corrector iteration limit"},
    {"height", "wave height selecting the wave"},
    {"heights", "comma-separated heights"},
    {"height_measure", "primary | companion"},
    {"n_modes", "Bloch modes on each side of zero"},
    {"dmu", "Floquet mesh spacing, 1/dmu an integer"},
    {"mu_max", "largest Floquet exponent swept"},
    {"tol_grow", "growth rate counted as unstable"},
    {"r_origin", "radius of the modulational window around 0"},
    {"mu_mod", "largest mu for the modulational flag"},
    {"kernel_radius", "eigenvalues this close to 0 at mu = 0 are kernel"},
    {"dt", "time step"},
    {"periods", "evolve this many wave periods"},
    {"t_final", "final time (overrides periods)"},
    {"evolve_points", "collocation points the wave is refined to before evolving"},
    {"substeps", "RK4 substeps per nonlinear stage"},
    {"snapshot_every", "steps between trajectory rows"},
    {"tail_fraction", "fraction of the top modes counted as tail"},
    {"workers", "threads for the spectrum sweep"},
    {"output_dir", "run directory (default: timestamped under runs/)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic traveling waves of bidirectional Whitham models"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  std::string config_path;
  std::vector<std::pair<std::string, std::string>> flags;

  const std::vector<std::pair<Command, std::string>> commands = {
      {Command::Bifurcate, "Continue a branch from its bifurcation point"},
      {Command::Spectrum, "Stability spectrum of the wave at a given height"},
      {Command::Evolve, "Time-evolve the wave at a given height"},
      {Command::BranchPoint, "Bifurcation point of the positive-height branch"},
      {Command::Sample, "Profiles at a list of heights"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [command, help] : commands) {
    auto* sub = app.add_subcommand(std::string(to_string(command)), help);
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->allow_extras();
    sub->add_option("--config", config_path, "key = value settings file");
    for (const auto& key : config_keys()) {
      if (key == "command") continue;
      if (key == "dump_state") {
        sub->add_flag_callback(flag_name(key), [&flags, key] { flags.emplace_back(key, "true"); },
                               "Write the final state as state.bin");
        continue;
      }
      sub->add_option_function<std::string>(
          flag_name(key), [&flags, key](const std::string& v) { flags.emplace_back(key, v); },
          option_help.contains(key) ? option_help.at(key) : "");
    }
    subs.emplace_back(command, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json(ConfigError(e.what())) << "\n";
    return 2;
  }

  Command command = Command::Bifurcate;
  for (const auto& [c, sub] : subs) {
    if (sub->parsed()) command = c;
  }

  RunConfig config;
  try {
    for (const auto& [c, sub] : subs) {
      for (const auto& extra : sub->remaining()) {
        // reports the unknown key together with the accepted ones
        RunConfig scratch;
        apply_setting(scratch, extra.rfind("--", 0) == 0 ? extra.substr(2) : extra, "0");
      }
    }
    const auto file = config_path.empty() ? std::vector<std::pair<std::string, std::string>>{}
                                          : read_config_file(config_path);
    config = resolve_config(command, file, flags);
  } catch (const Error& e) {
    std::cerr << error_json(e) << "\n";
    return exit_code(e.kind());
  }

  const auto result = run(config, std::cout);
  if (!result.dir.empty() && std::filesystem::exists(result.dir)) std::cout << "output: " << result.dir.string() << "\n";
  if (result.exit_code != 0) std::cerr << result.error_json << "\n";
  return result.exit_code;
}
