#include "whitham/run.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <ostream>

#include "json.hpp"
#include "whitham/continuation.hpp"
#include "whitham/evolution.hpp"
#include "whitham/output.hpp"
#include "whitham/stability.hpp"

namespace whitham {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

HeightMeasure measure_of(const RunConfig& c) {
  return c.height_measure == "companion" ? HeightMeasure::Companion : HeightMeasure::Primary;
}

NewtonOptions newton_of(const RunConfig& c) {
  NewtonOptions o;
  o.tol = c.newton_tol;
  o.max_iterations = c.newton_max_iterations;
  return o;
}

/// Branch long enough to contain the requested heights. For the primary
/// measure the continuation stops a little past the largest target.
Branch compute_branch(const RunConfig& c, const std::vector<double>& targets, std::ostream& out) {
  ContinuationConfig cc;
  cc.kappa = c.kappa;
  cc.n_points = c.n_points;
  cc.h = c.h;
  cc.eps0 = c.eps0;
  cc.max_steps = c.max_steps;
  cc.max_height = c.max_height;
  cc.bound_standoff = c.bound_standoff;
  cc.newton = newton_of(c);
  if (!targets.empty() && measure_of(c) == HeightMeasure::Primary) {
    const double top = *std::max_element(targets.begin(), targets.end());
    const double cap = top * 1.02 + 1e-3;
    if (!cc.max_height || cap < *cc.max_height) cc.max_height = cap;
  }
  auto branch = continue_branch(make_model(parse_model_id(c.model), c.n0), cc);
  const auto& last = branch.summaries.back();
  out << "branch: " << branch.size() << " points, stop " << to_string(branch.stop_reason) << ", c = "
      << format_number(last.c) << ", height = " << format_number(last.waveheight) << "\n";
  return branch;
}

std::string profile_csv(const Model& model, double kappa, const ContinuationPoint& p) {
  CosineGrid grid(kappa, static_cast<int>(p.values.size()));
  const auto comp = model.companion(p.c, p.values, grid);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < grid.size(); ++i) rows.push_back({grid.points()[i], p.values[i], comp[i]});
  return csv({"x", "value", "companion"}, rows);
}

json point_json(const ProfileSystem& system, const ContinuationPoint& p) {
  const auto s = summarize(system, p.as_vector());
  return {{"c", s.c},
          {"waveheight", s.waveheight},
          {"companion_height", number(s.companion_height)},
          {"max_value", s.max_value},
          {"min_value", s.min_value},
          {"residual", p.residual_norm}};
}

void run_bifurcate(const RunConfig& c, RunWriter& w, std::ostream& out) {
  const auto branch = compute_branch(c, {}, out);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < branch.size(); ++i) {
    const auto& s = branch.summaries[i];
    rows.push_back({static_cast<double>(i), s.c, s.waveheight, s.companion_height, s.max_value,
                    s.min_value, branch.tangent_dc[i]});
  }
  w.write("branch.csv",
          csv({"index", "c", "waveheight", "companion_height", "max_value", "min_value", "tangent_dc"}, rows));

  json folds = json::array();
  for (auto i : branch.folds) {
    folds.push_back({{"index", i}, {"c", branch.summaries[i].c}, {"waveheight", branch.summaries[i].waveheight}});
  }
  const auto& first = branch.summaries.front();
  const auto& last = branch.summaries.back();
  json j = {{"model", c.model},
            {"kappa", c.kappa},
            {"n_points", c.n_points},
            {"points", branch.size()},
            {"stop_reason", to_string(branch.stop_reason)},
            {"stop_detail", branch.stop_detail},
            {"folds", folds},
            {"first", {{"c", first.c}, {"waveheight", first.waveheight}}},
            {"last", {{"c", last.c}, {"waveheight", last.waveheight}, {"max_value", last.max_value}}}};
  if (auto bound = branch.model->termination_bound(last.c)) j["last"]["bound"] = *bound;
  w.write("branch.json", j.dump(2) + "\n");
  w.write("final_profile.csv", profile_csv(*branch.model, c.kappa, branch.points.back()));
}

void run_sample(const RunConfig& c, RunWriter& w, std::ostream& out) {
  const auto branch = compute_branch(c, c.heights, out);
  const auto pts = sample_branch(branch, c.heights, measure_of(c), newton_of(c));
  ProfileSystem system(branch.model, CosineGrid(c.kappa, c.n_points));
  json samples = json::array();
  std::vector<std::vector<double>> rows;
  CosineGrid grid(c.kappa, c.n_points);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    auto pj = point_json(system, pts[k]);
    pj["target"] = c.heights[k];
    samples.push_back(pj);
    const auto comp = branch.model->companion(pts[k].c, pts[k].values, grid);
    for (int i = 0; i < grid.size(); ++i) {
      rows.push_back({static_cast<double>(k), c.heights[k], pts[k].c, grid.points()[i], pts[k].values[i], comp[i]});
    }
    out << "height " << format_number(c.heights[k]) << ": c = " << format_number(pts[k].c) << "\n";
  }
  w.write("profiles.csv", csv({"sample", "target", "c", "x", "value", "companion"}, rows));
  w.write("samples.json", json{{"model", c.model},
                               {"kappa", c.kappa},
                               {"height_measure", c.height_measure},
                               {"samples", samples}}
                              .dump(2) + "\n");
}

void run_spectrum(const RunConfig& c, RunWriter& w, std::ostream& out) {
  const std::vector<double> targets{*c.height};
  const auto branch = compute_branch(c, targets, out);
  const auto point = sample_branch(branch, targets, measure_of(c), newton_of(c)).front();

  SweepOptions so;
  so.dmu = c.dmu;
  so.workers = c.workers;
  so.mu_max = c.mu_max;
  so.thresholds = {c.tol_grow, c.r_origin, c.mu_mod, c.kernel_radius};
  const auto sw = sweep(branch.model, c.kappa, point, c.n_modes, so);

  std::vector<std::vector<double>> eig_rows, growth_rows;
  for (const auto& s : sw.slices) {
    for (const auto& l : s.eigenvalues) eig_rows.push_back({s.mu, l.real(), l.imag()});
    growth_rows.push_back({s.mu, s.max_growth});
  }
  w.write("eigenvalues.csv", csv({"mu", "re", "im"}, eig_rows));
  w.write("growth.csv", csv({"mu", "max_re"}, growth_rows));
  w.write("wave.csv", profile_csv(*branch.model, c.kappa, point));

  ProfileSystem system(branch.model, CosineGrid(c.kappa, c.n_points));
  double max_growth = 0.0;
  for (const auto& s : sw.slices) max_growth = std::max(max_growth, s.max_growth);
  json j = {{"model", c.model},
            {"kappa", c.kappa},
            {"wave", point_json(system, point)},
            {"n_modes", c.n_modes},
            {"dmu", c.dmu},
            {"slices", sw.slices.size()},
            {"full_mesh", sw.full_mesh},
            {"max_growth", max_growth},
            {"thresholds",
             {{"tol_grow", c.tol_grow}, {"r_origin", c.r_origin}, {"mu_mod", c.mu_mod}, {"kernel_radius", c.kernel_radius}}},
            {"flags",
             {{"modulational", sw.flags.modulational},
              {"high_frequency", sw.flags.high_frequency},
              {"coperiodic", sw.flags.coperiodic}}}};
  w.write("spectrum.json", j.dump(2) + "\n");
  out << "flags: modulational=" << sw.flags.modulational << " high_frequency=" << sw.flags.high_frequency
      << " coperiodic=" << sw.flags.coperiodic << " (max growth " << format_number(max_growth) << ")\n";
}

std::string state_bytes(const EvolutionState& s) {
  static_assert(std::endian::native == std::endian::little, "state dumps are little-endian");
  std::string bytes(sizeof(std::int64_t) + 2 * sizeof(double) + 2 * s.u.size() * sizeof(double), '\0');
  char* p = bytes.data();
  const std::int64_t m = s.size();
  std::memcpy(p, &m, sizeof m);
  p += sizeof m;
  std::memcpy(p, &s.kappa, sizeof(double));
  p += sizeof(double);
  std::memcpy(p, &s.t, sizeof(double));
  p += sizeof(double);
  std::memcpy(p, s.u.data(), s.u.size() * sizeof(double));
  p += s.u.size() * sizeof(double);
  std::memcpy(p, s.eta.data(), s.eta.size() * sizeof(double));
  return bytes;
}

void run_evolve(const RunConfig& c, RunWriter& w, std::ostream& out) {
  const std::vector<double> targets{*c.height};
  const auto branch = compute_branch(c, targets, out);
  auto point = sample_branch(branch, targets, measure_of(c), newton_of(c)).front();
  const int n_evolve = c.evolve_points == 0 ? c.n_points : c.evolve_points;
  if (n_evolve != c.n_points) {
    point = refine_resolution(branch.model, c.kappa, point, n_evolve, *c.height, measure_of(c), newton_of(c));
    out << "refined to " << n_evolve << " points: c = " << format_number(point.c) << "\n";
  }
  const auto initial = state_from_point(branch.model, c.kappa, point);
  const double period = 2.0 * std::numbers::pi / (c.kappa * point.c);
  const double t_final = c.t_final ? *c.t_final : c.periods * period;

  auto scheme = SplittingScheme::yoshida6(c.dt);
  scheme.nonlinear_substeps = c.substeps;
  EvolutionOptions eo;
  eo.snapshot_every = c.snapshot_every;
  eo.tail_fraction = c.tail_fraction;
  eo.wave_speed = point.c;
  const auto r = evolve(initial, t_final, scheme, eo);

  std::vector<std::vector<double>> rows;
  double max_tail = 0.0;
  for (const auto& s : r.snapshots) {
    rows.push_back({s.t, s.l2_residual, s.max_norm, s.tail_energy});
    max_tail = std::max(max_tail, s.tail_energy);
  }
  w.write("trajectory.csv", csv({"t", "l2_residual", "max_norm", "tail_energy"}, rows));
  if (c.dump_state) w.write("state.bin", state_bytes(r.final_state));

  const auto& last = r.snapshots.back();
  json j = {{"model", c.model},
            {"kappa", c.kappa},
            {"c", point.c},
            {"collocation_points", n_evolve},
            {"grid_points", initial.size()},
            {"period", period},
            {"t_final", t_final},
            {"dt", c.dt},
            {"substeps", c.substeps},
            {"steps", r.steps},
            {"final_time", r.final_state.t},
            {"final_l2_residual", number(last.l2_residual)},
            {"max_tail_energy", max_tail},
            {"blew_up", r.blew_up}};
  if (r.blew_up) {
    j["blowup_time"] = r.blowup_time;
    j["blowup_detail"] = r.blowup_detail;
  }
  w.write("evolve.json", j.dump(2) + "\n");
  out << "evolved to t = " << format_number(r.final_state.t) << " in " << r.steps
      << " steps; L2 residual " << format_number(last.l2_residual) << ", max tail " << format_number(max_tail)
      << "\n";
  if (r.blew_up) throw BlowUpError(r.blowup_detail, r.blowup_time);
}

void run_branch_point(const RunConfig& c, RunWriter& w, std::ostream& out) {
  const auto bp = solve_positive_branch_point(c.kappa, c.n0);
  char line[96];
  std::snprintf(line, sizeof line, "c_star = %.5f, phi_star = %.5f\n", bp.c_star, bp.phi_star);
  out << line;
  w.write("branch_point.json", json{{"kappa", c.kappa},
                                    {"n0", c.n0},
                                    {"c_star", bp.c_star},
                                    {"phi_star", bp.phi_star},
                                    {"c2", ej_positive_c2(c.kappa, c.n0)}}
                                       .dump(2) + "\n");
}

json error_object(const std::exception& e) {
  json j = {{"error", "internal"}, {"kind", "internal"}, {"message", e.what()}};
  if (auto* err = dynamic_cast<const Error*>(&e)) {
    j["error"] = err->code();
    j["kind"] = err->kind() == ErrorKind::Validation ? "validation"
                : err->kind() == ErrorKind::Numerical ? "numerical"
                                                      : "io";
  }
  if (auto* b = dynamic_cast<const BlowUpError*>(&e)) j["t"] = b->t;
  if (auto* r = dynamic_cast<const RangeError*>(&e)) j["range"] = {r->lo, r->hi};
  if (auto* m = dynamic_cast<const EigenError*>(&e)) j["mu"] = m->mu;
  if (auto* f = dynamic_cast<const CorrectorFailure*>(&e)) j["residual_history"] = f->residual_history;
  return j;
}

int exit_code_of(const std::exception& e) {
  if (auto* err = dynamic_cast<const Error*>(&e)) return exit_code(err->kind());
  return 3;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return 2;
    case ErrorKind::Numerical: return 3;
    case ErrorKind::Io: return 4;
  }
  return 3;
}

std::string error_json(const std::exception& e) { return error_object(e).dump(); }

RunResult run(const RunConfig& config, std::ostream& out) {
  RunResult result;
  try {
    validate(config);
  } catch (const std::exception& e) {
    result.exit_code = exit_code_of(e);
    result.error_json = error_json(e);
    return result;
  }

  std::optional<RunWriter> writer;
  try {
    result.dir = config.output_dir.empty()
                     ? timestamped_run_dir(default_output_root(), to_string(config.command))
                     : std::filesystem::path(config.output_dir);
    writer.emplace(result.dir);
  } catch (const std::exception& e) {
    result.exit_code = exit_code_of(e);
    result.error_json = error_json(e);
    return result;
  }

  json failure;
  try {
    switch (config.command) {
      case Command::Bifurcate: run_bifurcate(config, *writer, out); break;
      case Command::Spectrum: run_spectrum(config, *writer, out); break;
      case Command::Evolve: run_evolve(config, *writer, out); break;
      case Command::BranchPoint: run_branch_point(config, *writer, out); break;
      case Command::Sample: run_sample(config, *writer, out); break;
    }
  } catch (const std::exception& e) {
    result.exit_code = exit_code_of(e);
    failure = error_object(e);
    result.error_json = failure.dump();
  }

  try {
    if (!failure.is_null()) writer->write("error.json", failure.dump(2) + "\n");
    json cfg = json::object();
    for (const auto& [k, v] : describe(config)) cfg[k] = v;
    json artifacts = json::array();
    for (const auto& a : writer->artifacts()) {
      artifacts.push_back({{"name", a.name}, {"sha256", a.sha256}, {"bytes", a.bytes}});
    }
    json manifest = {{"command", to_string(config.command)},
                     {"status", failure.is_null() ? "ok" : "error"},
                     {"exit_code", result.exit_code},
                     {"config", cfg},
                     {"artifacts", artifacts}};
    writer->write("manifest.json", manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    if (result.exit_code == 0) {
      result.exit_code = exit_code_of(e);
      result.error_json = error_json(e);
    }
  }
  return result;
}

}  // namespace whitham
