#include "whitham/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "whitham/error.hpp"
#include "whitham/models.hpp"

namespace whitham {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// shortest text that reads back to the same double
std::string fmt(double v) {
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("value '" + t + "' for " + std::string(key) + " is not a number");
  }
  return v;
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || v < INT32_MIN || v > INT32_MAX) {
    throw ConfigError("value '" + t + "' for " + std::string(key) + " is not an integer");
  }
  return static_cast<int>(v);
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("value '" + t + "' for " + std::string(key) + " is not a boolean");
}

std::optional<double> parse_optional(std::string_view key, std::string_view text) {
  const std::string t = trim(text);
  if (t.empty() || t == "none") return std::nullopt;
  return parse_double(key, t);
}

std::vector<double> parse_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::string t = trim(text);
  if (!t.empty() && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

std::string show_optional(const std::optional<double>& v) { return v ? fmt(*v) : "none"; }

std::string show_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define WHITHAM_DOUBLE(name) \
  {#name, {[](RunConfig& c, std::string_view v) { c.name = parse_double(#name, v); }, \
           [](const RunConfig& c) { return fmt(c.name); }}}
#define WHITHAM_INT(name) \
  {#name, {[](RunConfig& c, std::string_view v) { c.name = parse_int(#name, v); }, \
           [](const RunConfig& c) { return std::to_string(c.name); }}}
#define WHITHAM_OPTIONAL(name) \
  {#name, {[](RunConfig& c, std::string_view v) { c.name = parse_optional(#name, v); }, \
           [](const RunConfig& c) { return show_optional(c.name); }}}
#define WHITHAM_STRING(name) \
  {#name, {[](RunConfig& c, std::string_view v) { c.name = trim(v); }, \
           [](const RunConfig& c) { return c.name; }}}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"command",
       {[](RunConfig& c, std::string_view v) { c.command = parse_command(trim(v)); },
        [](const RunConfig& c) { return std::string(to_string(c.command)); }}},
      WHITHAM_STRING(model),
      WHITHAM_DOUBLE(kappa),
      WHITHAM_INT(n0),
      WHITHAM_INT(n_points),
      WHITHAM_DOUBLE(h),
      WHITHAM_DOUBLE(eps0),
      WHITHAM_INT(max_steps),
      WHITHAM_OPTIONAL(max_height),
      WHITHAM_DOUBLE(bound_standoff),
      WHITHAM_DOUBLE(newton_tol),
      WHITHAM_INT(newton_max_iterations),
      WHITHAM_OPTIONAL(height),
      {"heights",
       {[](RunConfig& c, std::string_view v) { c.heights = parse_list("heights", v); },
        [](const RunConfig& c) { return show_list(c.heights); }}},
      WHITHAM_STRING(height_measure),
      WHITHAM_INT(n_modes),
      WHITHAM_DOUBLE(dmu),
      WHITHAM_DOUBLE(mu_max),
      WHITHAM_DOUBLE(tol_grow),
      WHITHAM_DOUBLE(r_origin),
      WHITHAM_DOUBLE(mu_mod),
      WHITHAM_DOUBLE(kernel_radius),
      WHITHAM_DOUBLE(dt),
      WHITHAM_DOUBLE(periods),
      WHITHAM_OPTIONAL(t_final),
      WHITHAM_INT(evolve_points),
      WHITHAM_INT(substeps),
      WHITHAM_INT(snapshot_every),
      WHITHAM_DOUBLE(tail_fraction),
      {"dump_state",
       {[](RunConfig& c, std::string_view v) { c.dump_state = parse_bool("dump_state", v); },
        [](const RunConfig& c) { return std::string(c.dump_state ? "true" : "false"); }}},
      WHITHAM_INT(workers),
      WHITHAM_STRING(output_dir),
  };
  return table;
}

#undef WHITHAM_DOUBLE
#undef WHITHAM_INT
#undef WHITHAM_OPTIONAL
#undef WHITHAM_STRING

std::string accepted_keys() {
  std::string s;
  for (const auto& k : config_keys()) s += (s.empty() ? "" : ", ") + k;
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Bifurcate: return "bifurcate";
    case Command::Spectrum: return "spectrum";
    case Command::Evolve: return "evolve";
    case Command::BranchPoint: return "branch-point";
    case Command::Sample: return "sample";
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (auto c : {Command::Bifurcate, Command::Spectrum, Command::Evolve, Command::BranchPoint,
                 Command::Sample}) {
    if (name == to_string(c)) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) +
                    "' (expected bifurcate, spectrum, evolve, branch-point or sample)");
}

RunConfig default_config(Command command, std::string_view model) {
  RunConfig c;
  c.command = command;
  c.model = std::string(model);
  if (model == "hp") c.max_height = 3.0;
  if (command == Command::Evolve) {
    c.evolve_points = 2048;
    c.snapshot_every = 1000;
  }
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  std::string k = trim(key);
  for (auto& ch : k)
    if (ch == '-') ch = '_';
  for (const auto& [name, f] : fields()) {
    if (name == k) {
      f.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + k + "'; accepted keys: " + accepted_keys());
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    out.emplace_back(trim(line.substr(0, eq)), value);
  }
  return out;
}

RunConfig resolve_config(Command command,
                         const std::vector<std::pair<std::string, std::string>>& file_settings,
                         const std::vector<std::pair<std::string, std::string>>& flag_settings) {
  std::string model = "ej";
  for (const auto* list : {&file_settings, &flag_settings}) {
    for (const auto& [k, v] : *list)
      if (trim(k) == "model") model = trim(v);
  }
  RunConfig c = default_config(command, model);
  for (const auto& [k, v] : file_settings) apply_setting(c, k, v);
  for (const auto& [k, v] : flag_settings) apply_setting(c, k, v);
  if (c.command != command) {
    throw ConfigError("config file is for command '" + std::string(to_string(c.command)) +
                      "', not '" + std::string(to_string(command)) + "'");
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  parse_model_id(c.model);
  require(c.kappa > 0.0 && std::isfinite(c.kappa), "kappa must be positive");
  require(c.n0 >= 1, "n0 must be at least 1");
  require(c.n_points >= 16, "n_points must be at least 16");
  require(c.h > 0.0, "h must be positive");
  require(c.eps0 > 0.0, "eps0 must be positive");
  require(c.max_steps >= 1, "max_steps must be at least 1");
  require(!c.max_height || *c.max_height > 0.0, "max_height must be positive");
  require(c.bound_standoff >= 0.0 && c.bound_standoff < 1.0, "bound_standoff must lie in [0, 1)");
  require(c.newton_tol > 0.0, "newton_tol must be positive");
  require(c.newton_max_iterations >= 1, "newton_max_iterations must be at least 1");
  require(c.height_measure == "primary" || c.height_measure == "companion",
          "height_measure must be primary or companion");
  require(!c.height || *c.height > 0.0, "height must be positive");
  for (double v : c.heights) require(v > 0.0, "heights must be positive");
  require(c.n_modes >= 1, "n_modes must be at least 1");
  require(c.dmu > 0.0 && c.dmu <= 1.0, "dmu must lie in (0, 1]");
  const double count = 1.0 / c.dmu;
  require(std::abs(count - std::round(count)) <= 1e-9 * count, "1/dmu must be an integer");
  require(c.mu_max > 0.0 && c.mu_max <= 1.0, "mu_max must lie in (0, 1]");
  require(c.tol_grow >= 0.0 && c.r_origin > 0.0 && c.mu_mod > 0.0 && c.kernel_radius >= 0.0,
          "thresholds must be non-negative (r_origin and mu_mod positive)");
  require(c.dt > 0.0, "dt must be positive");
  require(c.periods > 0.0, "periods must be positive");
  require(!c.t_final || *c.t_final > 0.0, "t_final must be positive");
  require(c.evolve_points == 0 || c.evolve_points >= 16, "evolve_points must be 0 or at least 16");
  require(c.substeps >= 1, "substeps must be at least 1");
  require(c.snapshot_every >= 1, "snapshot_every must be at least 1");
  require(c.tail_fraction > 0.0 && c.tail_fraction < 1.0, "tail_fraction must lie in (0, 1)");
  require(c.workers >= 1, "workers must be at least 1");

  switch (c.command) {
    case Command::Spectrum:
      require(c.height.has_value(), "spectrum needs a height");
      require(c.n_modes < c.n_points, "n_modes must be below n_points");
      break;
    case Command::Evolve:
      require(c.height.has_value(), "evolve needs a height");
      require(c.model == "ej" || c.model == "ej-positive", "only the EJ models can be evolved");
      break;
    case Command::Sample:
      require(!c.heights.empty() || c.height.has_value(), "sample needs heights");
      break;
    case Command::BranchPoint:
      require(c.model == "ej-positive", "branch-point applies to the ej-positive model");
      break;
    case Command::Bifurcate:
      break;
  }
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, f] : fields()) out.emplace_back(name, f.get(config));
  return out;
}

}  // namespace whitham
