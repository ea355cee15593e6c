// Acceptance run: one PASS/FAIL line per criterion, evidence printed above it.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "whitham/continuation.hpp"
#include "whitham/evolution.hpp"
#include "whitham/stability.hpp"

using namespace whitham;

namespace {

constexpr double kPi = std::numbers::pi;

double c_kappa(double kappa) { return std::sqrt(std::tanh(kappa) / kappa); }

ContinuationConfig config_for(double kappa, int n_points = 256) {
  ContinuationConfig c;
  c.kappa = kappa;
  c.n_points = n_points;
  return c;
}

const Branch& branch_of(ModelId id) {
  static std::map<ModelId, Branch> cache;
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  auto cfg = config_for(id == ModelId::Hp ? 1.611 : 1.0);
  if (id == ModelId::Hp) cfg.max_height = 3.0;
  return cache.emplace(id, continue_branch(make_model(id), cfg)).first->second;
}

ContinuationPoint at_height(ModelId id, double height) {
  return sample_branch(branch_of(id), std::vector<double>{height}).front();
}

ContinuationPoint small_wave(ModelId id, double kappa, double height, int n_points = 256) {
  auto cfg = config_for(kappa, n_points);
  cfg.max_height = height * 1.05 + 1e-3;
  const auto b = continue_branch(make_model(id), cfg);
  return sample_branch(b, std::vector<double>{height}).front();
}

const char* name_of(ModelId id) {
  switch (id) {
    case ModelId::EjZero: return "EJ";
    case ModelId::EjPositive: return "EJ+";
    case ModelId::Hp: return "HP";
    case ModelId::Bw: return "BW";
  }
  return "?";
}

const char* oracle_name(ModelId id) {
  return id == ModelId::Hp ? "hp" : id == ModelId::Bw ? "bw" : "ej";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------

bool onset() {
  bool ok = true;
  struct Case { ModelId id; double kappa; double printed; };
  for (auto cs : {Case{ModelId::EjZero, 1.0, 0.8726}, Case{ModelId::Bw, 1.0, 0.8727}, Case{ModelId::Hp, 1.611, 0.7569}}) {
    const double c0 = branch_of(cs.id).summaries.front().c;
    const double err = std::abs(c0 - c_kappa(cs.kappa));
    std::printf("    %s kappa=%.3f: onset c = %.7f, c_kappa = %.7f, |diff| = %.1e (printed %.4f)\n", name_of(cs.id),
                cs.kappa, c0, c_kappa(cs.kappa), err, cs.printed);
    ok = ok && err <= 1e-4;
  }
  return ok;
}

bool waypoints() {
  bool ok = true;
  struct Case { ModelId id; std::vector<double> heights, speeds, tols; };
  const std::vector<Case> cases = {
      {ModelId::EjZero, {0.15, 0.30, 0.40, 0.49}, {0.8595, 0.8312, 0.8138, 0.8051}, {2e-3, 2e-3, 2e-3, 2e-2}},
      {ModelId::Hp, {0.15, 0.30, 0.50, 1.00}, {0.7528, 0.7412, 0.7201, 0.6759}, {3e-3, 3e-3, 3e-3, 3e-3}},
      {ModelId::Bw, {0.14, 0.30, 0.40, 0.50}, {0.8662, 0.8470, 0.8333, 0.8237}, {2e-3, 2e-3, 2e-3, 2e-3}},
  };
  for (const auto& cs : cases) {
    const auto pts = sample_branch(branch_of(cs.id), cs.heights);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const double err = std::abs(pts[k].c - cs.speeds[k]);
      std::printf("    %s height %.2f: c = %.5f, expected %.4f, |diff| = %.1e (tol %.0e)\n", name_of(cs.id),
                  cs.heights[k], pts[k].c, cs.speeds[k], err, cs.tols[k]);
      ok = ok && err <= cs.tols[k];
    }
  }
  return ok;
}

bool termination() {
  bool ok = true;
  for (auto id : {ModelId::EjZero, ModelId::Bw}) {
    const auto& b = branch_of(id);
    const auto& s = b.summaries.back();
    const double bound = id == ModelId::EjZero ? s.c * (1.0 - 1.0 / std::sqrt(3.0)) : s.c * s.c / 2.0;
    const double ratio = s.max_value / bound;
    std::printf("    %s: stop %s, max = %.6f, bound = %.6f, max/bound = %.5f\n", name_of(id),
                std::string(to_string(b.stop_reason)).c_str(), s.max_value, bound, ratio);
    ok = ok && b.stop_reason == StopReason::AmplitudeBound && std::abs(ratio - 1.0) <= 5e-3;
  }
  const auto& hp = branch_of(ModelId::Hp);
  const auto& last = hp.summaries.back();
  std::printf("    HP kappa=1.611: stop %s at height %.4f, bound %s, %zu fold(s)\n",
              std::string(to_string(hp.stop_reason)).c_str(), last.waveheight,
              hp.model->termination_bound(last.c) ? "present" : "none", hp.folds.size());
  bool fold_high = false;
  for (auto i : hp.folds) {
    const auto& f = hp.summaries[i];
    const bool high = f.waveheight >= 1.5;
    std::printf("      fold at height %.4f, c = %.5f; c after it: %.5f\n", f.waveheight, f.c, last.c);
    fold_high = fold_high || (high && last.c > f.c && hp.tangent_dc.back() > 0.0);
  }
  ok = ok && hp.stop_reason == StopReason::MaxHeight && last.waveheight >= 3.0 - 1e-9 &&
       !hp.model->termination_bound(last.c) && fold_high;
  return ok;
}

bool truncation() {
  std::vector<double> first_c, second_h;
  bool all_two = true;
  for (int n : {64, 128, 256, 512}) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = config_for(1.0, n);
    cfg.max_height = 16.0;
    const auto b = continue_branch(make_model(ModelId::Hp), cfg);
    std::printf("    N=%d: %zu points, stop %s at height %.3f, %zu fold(s) (%.0fs)\n", n, b.size(),
                std::string(to_string(b.stop_reason)).c_str(), b.summaries.back().waveheight, b.folds.size(),
                seconds_since(t0));
    for (auto i : b.folds) std::printf("      fold at height %.4f, c = %.6f\n", b.summaries[i].waveheight, b.summaries[i].c);
    if (b.folds.size() >= 2) {
      first_c.push_back(b.summaries[b.folds[0]].c);
      second_h.push_back(b.summaries[b.folds[1]].waveheight);
    } else {
      all_two = false;
      if (b.folds.size() == 1) first_c.push_back(b.summaries[b.folds[0]].c);
    }
  }
  bool monotone = second_h.size() >= 2;
  for (std::size_t k = 1; k < second_h.size(); ++k) monotone = monotone && second_h[k] > second_h[k - 1];
  double spread = 0.0;
  if (!first_c.empty()) {
    spread = *std::max_element(first_c.begin(), first_c.end()) - *std::min_element(first_c.begin(), first_c.end());
  }
  std::printf("    both folds at every N: %s; second fold monotone over the N that have it: %s; first-fold c spread %.1e\n",
              all_two ? "yes" : "no", monotone ? "yes" : "no", spread);
  return all_two && monotone && spread <= 1e-2;
}

bool branch_point() {
  const auto bp = solve_positive_branch_point(1.0, 1);
  std::printf("    (c*, phi*) = (%.7f, %.7f)\n", bp.c_star, bp.phi_star);
  return std::abs(bp.c_star - 1.11834) <= 1e-4 && std::abs(bp.phi_star - 0.15677) <= 1e-4;
}

double near_origin_growth(const SpectrumSweep& s, double r_origin, double mu_mod) {
  double g = 0.0;
  for (const auto& sl : s.slices) {
    if (sl.mu <= 0.0 || sl.mu > mu_mod) continue;
    for (auto z : sl.eigenvalues) {
      if (std::abs(z) < r_origin) g = std::max(g, z.real());
    }
  }
  return g;
}

bool critical_wavenumbers() {
  bool ok = true;
  SweepOptions o;
  o.dmu = 1.0 / 2000.0;
  o.mu_max = 0.1;
  o.thresholds.tol_grow = 1e-9;
  struct Case { ModelId id; double kappa; double height; bool expect; };
  for (auto cs : {Case{ModelId::EjZero, 1.005, 0.01766, false}, Case{ModelId::EjZero, 1.008, 0.01766, true},
                  Case{ModelId::Hp, 1.609, 0.03, false}, Case{ModelId::Hp, 1.611, 0.03, true}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = small_wave(cs.id, cs.kappa, cs.height);
    const auto s = sweep(make_model(cs.id), cs.kappa, p, 64, o);
    std::printf("    %s kappa=%.3f height %.5f (c = %.6f): modulational %s, near-origin growth %.2e (%d slices, %.0fs)\n",
                name_of(cs.id), cs.kappa, cs.height, p.c, s.flags.modulational ? "true" : "false",
                near_origin_growth(s, o.thresholds.r_origin, o.thresholds.mu_mod), static_cast<int>(s.slices.size()),
                seconds_since(t0));
    ok = ok && s.flags.modulational == cs.expect;
  }
  std::printf("    (N=64 modes, dmu=1/2000 up to mu_mod=0.1, tol_grow=1e-9)\n");
  return ok;
}

bool taxonomy() {
  bool ok = true;
  SweepOptions o;
  o.dmu = 1.0 / 500.0;
  struct Case { ModelId id; double kappa; double height; bool large; };
  for (auto cs : {Case{ModelId::EjZero, 1.0, 0.30, true}, Case{ModelId::Hp, 1.611, 0.30, true},
                  Case{ModelId::Bw, 1.0, 0.30, true}, Case{ModelId::EjZero, 1.0, 0.01, false},
                  Case{ModelId::Hp, 1.611, 0.03, false}, Case{ModelId::Bw, 1.0, 0.01, false}}) {
    const auto p = cs.large ? at_height(cs.id, cs.height) : small_wave(cs.id, cs.kappa, cs.height);
    const auto s = sweep(make_model(cs.id), cs.kappa, p, 50, o);
    double max_growth = 0.0;
    for (const auto& sl : s.slices) max_growth = std::max(max_growth, sl.max_growth);
    bool good = !s.flags.coperiodic;
    if (cs.large) good = good && s.flags.modulational && s.flags.high_frequency;
    else good = good && !s.flags.high_frequency;
    std::printf("    %s height %.2f: modulational %d, high-frequency %d, co-periodic %d, max growth %.3e (mu=0: %.3e) %s\n",
                name_of(cs.id), cs.height, s.flags.modulational, s.flags.high_frequency, s.flags.coperiodic,
                max_growth, s.slices.front().max_growth, good ? "ok" : "MISMATCH");
    if (s.flags.coperiodic) {
      std::printf("      mu=0 max growth vs modes:");
      for (int n : {10, 20, 35, 50, 80}) {
        const auto m = assemble_bloch_matrix(make_model(cs.id), cs.kappa, p, 0.0, n);
        std::printf(" N=%d %.2f", n, eigenvalues(m).max_growth);
      }
      std::printf("\n");
    }
    ok = ok && good;
  }
  std::printf("    (N=50 modes, dmu=1/500, default thresholds)\n");
  return ok;
}

bool oracle_equivalence() {
  bool ok = true;
  double worst_closed = 0.0;
  for (auto id : {ModelId::EjZero, ModelId::Hp, ModelId::Bw}) {
    for (double kappa : {1.0, 1.611, 2.5}) {
      for (double c : {c_kappa(kappa), 0.6}) {
        ContinuationPoint zero{c, std::vector<double>(64, 0.0)};
        for (double mu : {0.0, 0.3, 0.5, 0.77}) {
          const auto got = eigenvalues(assemble_bloch_matrix(make_model(id), kappa, zero, mu, 20)).eigenvalues;
          const auto want = oracle::constant_state_spectrum(oracle_name(id), kappa, c, mu, 20);
          worst_closed = std::max(worst_closed, oracle::multiset_distance(got, want));
        }
      }
    }
  }
  {
    const double c = 1.3, phi = ej_gamma_minus(1.3);
    ContinuationPoint flat{c, std::vector<double>(64, phi)};
    const double eta = make_model(ModelId::EjZero)->companion_at(c, phi);
    for (double mu : {0.0, 0.25, 0.5}) {
      const auto got = eigenvalues(assemble_bloch_matrix(make_model(ModelId::EjZero), 1.0, flat, mu, 20)).eigenvalues;
      const auto want = oracle::constant_state_spectrum("ej", 1.0, c, mu, 20, phi, eta);
      worst_closed = std::max(worst_closed, oracle::multiset_distance(got, want));
    }
  }
  std::printf("    zero/constant-state spectra vs closed form: max distance %.2e (tol 1e-10)\n", worst_closed);
  ok = ok && worst_closed <= 1e-10;

  double worst_kernel = 0.0;
  int checked = 0;
  struct Range { ModelId id; double top; };
  for (auto r : {Range{ModelId::EjZero, 0.40}, Range{ModelId::Hp, 1.0}, Range{ModelId::Bw, 0.40}}) {
    const auto& b = branch_of(r.id);
    double local = 0.0, local50 = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, b.size() / 60);
    for (std::size_t i = 0; i < b.size(); i += stride) {
      if (b.summaries[i].waveheight > r.top) break;
      for (int n_modes : {50, 128}) {
        const auto profile = prepare_profile(b.model, b.kappa, b.points[i], n_modes);
        const auto m = assemble_bloch_matrix(profile, 0.0, n_modes);
        const auto v = translation_mode(profile, n_modes);
        const double res = (m.entries * v).norm() / v.norm();
        (n_modes == 50 ? local50 : local) = std::max(n_modes == 50 ? local50 : local, res);
      }
      ++checked;
    }
    std::printf("    %s: translation-mode residual |M v|/|v| up to height %.2f: %.2e at 128 modes (%.2e at 50)\n",
                name_of(r.id), r.top, local, local50);
    worst_kernel = std::max(worst_kernel, local);
  }
  std::printf("    translation mode: %d points, worst residual %.2e at 128 modes (tol 1e-6)\n", checked, worst_kernel);
  ok = ok && worst_kernel <= 1e-6;

  double worst_h = 0.0;
  struct Wave { ModelId id; double height; };
  for (auto w : {Wave{ModelId::EjZero, 0.15}, Wave{ModelId::Hp, 0.15}, Wave{ModelId::Bw, 0.14}}) {
    const auto p = at_height(w.id, w.height);
    const auto& b = branch_of(w.id);
    const auto p50 = prepare_profile(b.model, b.kappa, p, 50);
    const auto p128 = prepare_profile(b.model, b.kappa, p, 128);
    double local = 0.0;
    for (double mu : {0.0, 0.1, 0.25, 0.5, 0.8}) {
      const auto a = eigenvalues(assemble_bloch_matrix(p50, mu, 50)).eigenvalues;
      const auto c = eigenvalues(assemble_bloch_matrix(p128, mu, 128)).eigenvalues;
      local = std::max(local, oracle::hausdorff(a, c, 1.0));
    }
    std::printf("    %s height %.2f: N=50 vs N=128 Hausdorff on |lambda| <= 1: %.2e\n", name_of(w.id), w.height, local);
    worst_h = std::max(worst_h, local);
  }
  ok = ok && worst_h <= 1e-3;
  return ok;
}

struct PositiveWave {
  ModelPtr model;
  ContinuationPoint point;
};

const PositiveWave& positive_wave() {
  static const PositiveWave w = [] {
    auto model = make_model(ModelId::EjPositive);
    const auto b = continue_branch(model, config_for(1.0));
    const auto p = sample_branch(b, std::vector<double>{0.387}, HeightMeasure::Companion).front();
    return PositiveWave{model, p};
  }();
  return w;
}

double max_diff(const EvolutionState& a, const EvolutionState& b) {
  double d = 0.0;
  for (int j = 0; j < a.size(); ++j) d = std::max({d, std::abs(a.u[j] - b.u[j]), std::abs(a.eta[j] - b.eta[j])});
  return d;
}

double order_study(const PositiveWave& w, int substeps) {
  const auto p = refine_resolution(w.model, 1.0, w.point, 64, 0.387, HeightMeasure::Companion);
  const auto s = state_from_point(w.model, 1.0, p);
  const double period = 2.0 * kPi / p.c;
  auto run = [&](int steps) {
    auto scheme = SplittingScheme::yoshida6(period / steps);
    scheme.nonlinear_substeps = substeps;
    EvolutionOptions o;
    o.snapshot_every = 1 << 30;
    return evolve(s, period, scheme, o).final_state;
  };
  const auto ref = run(4096);
  std::vector<double> log_dt, log_err;
  for (int steps : {256, 512, 1024}) {
    const double e = max_diff(run(steps), ref);
    std::printf("      substeps %d, dt = T/%d: error %.3e\n", substeps, steps, e);
    log_dt.push_back(std::log(period / steps));
    log_err.push_back(std::log(e));
  }
  return oracle::fitted_slope(log_dt, log_err);
}

bool positive_evolution() {
  const auto& w = positive_wave();
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = refine_resolution(w.model, 1.0, w.point, 2048, 0.387, HeightMeasure::Companion);
  const auto s = state_from_point(w.model, 1.0, p);
  const double period = 2.0 * kPi / p.c;
  std::printf("    wave: psi height 0.387, c = %.7f (N=256: %.7f), period %.6f, M = %d\n", p.c, w.point.c, period,
              s.size());

  auto scheme = SplittingScheme::yoshida6(1e-3);
  scheme.nonlinear_substeps = 4;
  EvolutionOptions o;
  o.snapshot_every = 2000;
  o.wave_speed = p.c;
  const auto r = evolve(s, 15.0 * period, scheme, o);
  double max_tail = 0.0;
  for (const auto& snap : r.snapshots) {
    std::printf("      t = %8.3f: L2 residual %.3e, tail %.3e\n", snap.t, snap.l2_residual, snap.tail_energy);
    max_tail = std::max(max_tail, snap.tail_energy);
  }
  const double resid = r.snapshots.back().l2_residual;
  std::printf("    15 periods, dt = 0.001, 4 RK4 substeps: %ld steps, blew up: %s, final L2 residual %.3e (tol 1e-5), max tail %.2e (%.0fs)\n",
              r.steps, r.blew_up ? "yes" : "no", resid, max_tail, seconds_since(t0));

  std::printf("    one-period refinement study (N=64, reference dt = T/4096):\n");
  const double order = order_study(w, 4);
  const double order1 = order_study(w, 1);
  std::printf("    fitted order %.3f with 4 substeps (tol 6 +- 0.3); %.3f with one RK4 step per stage\n", order, order1);
  return !r.blew_up && resid <= 1e-5 && max_tail <= 1e-10 && std::abs(order - 6.0) <= 0.3;
}

bool ill_posed_evolution() {
  const auto model = make_model(ModelId::EjZero);
  auto cfg = config_for(1.0);
  cfg.max_height = 0.01;
  const auto b = continue_branch(model, cfg);
  const auto p0 = sample_branch(b, std::vector<double>{0.00109}, HeightMeasure::Companion).front();
  const auto p = refine_resolution(model, 1.0, p0, 2048, 0.00109, HeightMeasure::Companion);
  const auto s = state_from_point(model, 1.0, p);
  const double period = 2.0 * kPi / p.c;
  std::printf("    wave: eta height 0.00109, c = %.7f, period %.4f, M = %d, dt/dx = %.4f\n", p.c, period, s.size(),
              1e-3 / s.dx());

  auto scheme = SplittingScheme::yoshida6(1e-3);
  scheme.nonlinear_substeps = 4;
  EvolutionOptions o;
  o.snapshot_every = 50;
  o.wave_speed = p.c;
  const auto r = evolve(s, 2.55, scheme, o);
  const double tail0 = r.snapshots.front().tail_energy;
  double peak = 0.0, t_six = -1.0;
  for (const auto& snap : r.snapshots) {
    peak = std::max(peak, snap.tail_energy);
    if (t_six < 0.0 && snap.tail_energy >= 1e6 * tail0) t_six = snap.t;
  }
  for (std::size_t k = 0; k < r.snapshots.size(); k += 8) {
    std::printf("      t = %.3f: tail %.3e, max %.3e\n", r.snapshots[k].t, r.snapshots[k].tail_energy, r.snapshots[k].max_norm);
  }
  const double orders = peak > 0.0 && tail0 > 0.0 ? std::log10(peak / tail0) : 0.0;
  for (const auto& snap : r.snapshots) {
    if (snap.tail_energy >= 1e-6) {
      std::printf("    tail energy first exceeds 1e-6 at t = %.3f\n", snap.t);
      break;
    }
  }
  std::printf("    tail %.2e -> %.2e: %.1f orders before t = %.3f; six orders first reached at t = %.3f%s (%.1f%% of a period)\n",
              tail0, peak, orders, r.final_state.t, t_six, r.blew_up ? ", blew up" : "", 100.0 * t_six / period);
  return t_six > 0.0 && t_six < 2.55;
}

bool local_expansion() {
  auto cfg = config_for(1.0);
  cfg.max_height = 2.0e-3 + 1e-5;
  const auto b = continue_branch(make_model(ModelId::EjZero), cfg);
  CosineGrid grid(1.0, cfg.n_points);
  const double ck = c_kappa(1.0);
  std::vector<double> e2, dc;
  for (const auto& p : b.points) {
    const double eps = forward_cosine(p.values, grid).coeffs[1];
    if (eps < 1e-5 * (1.0 - 1e-6) || eps > 1e-3) continue;
    e2.push_back(eps * eps);
    dc.push_back(p.c - ck);
  }
  const double slope = oracle::fitted_slope(e2, dc);
  const double want = -2.57715;
  std::printf("    %zu points with eps in [1e-5, 1e-3]: fitted coefficient %.6f, expansion %.5f, rel. error %.2e (tol 1e-2)\n",
              e2.size(), slope, want, std::abs(slope / want - 1.0));
  return e2.size() >= 5 && std::abs(slope / want - 1.0) <= 1e-2;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"bifurcation onset", onset},
      {"branch waypoints", waypoints},
      {"termination behavior", termination},
      {"HP truncation diagnosis", truncation},
      {"positive branch point", branch_point},
      {"critical wavenumbers", critical_wavenumbers},
      {"instability taxonomy", taxonomy},
      {"FFHM oracle equivalence", oracle_equivalence},
      {"time evolution, well-posed side", positive_evolution},
      {"time evolution, ill-posed side", ill_posed_evolution},
      {"local-expansion consistency", local_expansion},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  std::vector<std::string> lines;
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    std::printf("criterion %d: %s\n", id, criteria[k].first.c_str());
    std::fflush(stdout);
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    try {
      pass = criteria[k].second();
    } catch (const std::exception& e) {
      std::printf("    exception: %s\n", e.what());
    }
    char line[160];
    std::snprintf(line, sizeof line, "%s  criterion %2d  %s (%.0fs)", pass ? "PASS" : "FAIL", id,
                  criteria[k].first.c_str(), seconds_since(t0));
    std::printf("%s\n\n", line);
    std::fflush(stdout);
    lines.emplace_back(line);
    failures += !pass;
  }
  std::printf("summary\n");
  for (const auto& l : lines) std::printf("  %s\n", l.c_str());
  return failures == 0 ? 0 : 1;
}
