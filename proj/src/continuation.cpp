#include "whitham/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "whitham/error.hpp"

namespace whitham {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::AmplitudeBound: return "AMPLITUDE_BOUND";
    case StopReason::MaxHeight: return "MAX_HEIGHT";
    case StopReason::MaxSteps: return "MAX_STEPS";
    case StopReason::CorrectorFailure: return "CORRECTOR_FAILURE";
  }
  return "?";
}

void validate(const ContinuationConfig& config) {
  if (!(config.kappa > 0.0)) throw ConfigError("kappa must be positive");
  if (config.n_points < 16) throw ConfigError("n_points must be at least 16");
  if (!(config.h > 0.0)) throw ConfigError("step h must be positive");
  if (!(config.eps0 > 0.0)) throw ConfigError("eps0 must be positive");
  if (config.max_steps < 1) throw ConfigError("max_steps must be at least 1");
  if (config.bound_standoff < 0.0 || config.bound_standoff >= 1.0) {
    throw ConfigError("bound_standoff must lie in [0, 1)");
  }
}

PointSummary summarize(const ProfileSystem& system, const Eigen::VectorXd& y) {
  PointSummary s;
  s.c = y[0];
  const double top = system.value_at_crest(y);
  const double bottom = system.value_at_trough(y);
  const auto values = y.tail(system.size());
  s.waveheight = top - bottom;
  s.max_value = std::max({values.maxCoeff(), top, bottom});
  s.min_value = std::min({values.minCoeff(), top, bottom});
  s.companion_height = system.model().has_pointwise_companion()
                           ? companion_waveheight(system, y)
                           : std::numeric_limits<double>::quiet_NaN();
  return s;
}

SeedResult seed_branch(const ProfileSystem& system, const ContinuationConfig& config) {
  const auto& grid = system.grid();
  const int n = grid.size();
  LocalSeed seed;
  try {
    seed = system.model().seed(grid.kappa());
  } catch (const SeedDegenerateError& e) {
    throw SeedError(std::string("cannot seed branch: ") + e.what());
  }
  const double eps = config.eps0;
  Eigen::VectorXd y(n + 1), z(n + 1);
  y[0] = seed.c_of_eps(eps);
  z[0] = seed.dc_deps(eps);
  for (int i = 0; i < n; ++i) {
    y[i + 1] = seed.profile_of_eps(grid.points()[i], eps);
    z[i + 1] = seed.dprofile_deps(grid.points()[i], eps);
  }
  z.normalize();

  SeedResult out;
  try {
    // first-order seed: pin the first cosine coefficient instead of c
    Constraint pin = Constraint::fixed_speed(y[0], n);
    if (!seed.speed_second_order) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n + 1);
      for (int i = 0; i < n; ++i) grad[i + 1] = 2.0 * grid.cos_nx(1, i) / n;
      pin.value = [grad, eps](const Eigen::VectorXd& v) { return grad.dot(v) - eps; };
      pin.gradient = [grad](const Eigen::VectorXd&) { return grad; };
    }
    AugmentedSystem aug{&system, pin};
    // the seed is O(eps0), so its tolerance is taken relative to that
    NewtonOptions options = config.newton;
    options.tol *= std::min(1.0, eps);
    auto r = newton_correct(aug, y, options);
    out.y = std::move(r.y);
    out.point = std::move(r.point);
    out.tangent = tangent_solve(system.jacobian(out.y), z);
  } catch (const CorrectorFailure& e) {
    throw SeedError(std::string("corrector failed at the seed (resonant or degenerate kappa?): ") +
                    e.what());
  } catch (const TangentFailure& e) {
    throw SeedError(std::string("singular tangent at the seed: ") + e.what());
  }
  return out;
}

namespace {

void record(Branch& branch, const ProfileSystem& system, const Eigen::VectorXd& y,
            const ContinuationPoint& point, double dc) {
  branch.points.push_back(point);
  branch.summaries.push_back(summarize(system, y));
  if (!branch.tangent_dc.empty() && (branch.tangent_dc.back() < 0.0) != (dc < 0.0)) {
    branch.folds.push_back(branch.points.size() - 1);
  }
  branch.tangent_dc.push_back(dc);
}

}  // namespace

Branch continue_branch(ModelPtr model, const ContinuationConfig& config) {
  validate(config);
  ProfileSystem system(model, CosineGrid(config.kappa, config.n_points), config.jacobian);
  Branch branch;
  branch.model = model;
  branch.kappa = config.kappa;
  branch.n_points = config.n_points;

  auto seed = seed_branch(system, config);
  Eigen::VectorXd y = seed.y;
  Eigen::VectorXd z = seed.tangent;
  record(branch, system, y, seed.point, z[0]);

  double h = config.h;
  int successes = 0;
  int halvings = 0;
  for (int step = 1;; ++step) {
    if (step > config.max_steps) {
      branch.stop_reason = StopReason::MaxSteps;
      branch.stop_detail = "step cap reached";
      return branch;
    }
    const Eigen::VectorXd predictor = y + h * z;
    AugmentedSystem aug{&system, Constraint::arclength(z, predictor)};
    NewtonResult corrected;
    Eigen::VectorXd z_next;
    bool ok = true;
    std::string why;
    try {
      corrected = newton_correct(aug, predictor, config.newton);
      z_next = tangent_solve(system.jacobian(corrected.y), z);
    } catch (const CorrectorFailure& e) {
      ok = false;
      why = e.what();
    } catch (const TangentFailure& e) {
      ok = false;
      why = e.what();
    }
    if (!ok) {
      if (++halvings > config.max_halvings) {
        branch.stop_reason = StopReason::CorrectorFailure;
        std::ostringstream msg;
        msg << why << " (after " << config.max_halvings << " step halvings, h = " << h << ")";
        branch.stop_detail = msg.str();
        return branch;
      }
      h *= 0.5;
      successes = 0;
      --step;
      continue;
    }
    halvings = 0;
    y = std::move(corrected.y);
    z = std::move(z_next);
    record(branch, system, y, corrected.point, z[0]);
    const auto& s = branch.summaries.back();
    if (config.progress) config.progress(branch.size() - 1, s.c, s.waveheight);

    if (auto bound = model->termination_bound(s.c)) {
      if (s.max_value >= (1.0 - config.bound_standoff) * *bound) {
        branch.stop_reason = StopReason::AmplitudeBound;
        std::ostringstream msg;
        msg << "max value " << s.max_value << " reached the bound " << *bound << " at c = " << s.c;
        branch.stop_detail = msg.str();
        return branch;
      }
    }
    if (config.max_height && s.waveheight >= *config.max_height) {
      branch.stop_reason = StopReason::MaxHeight;
      branch.stop_detail = "waveheight reached the configured maximum";
      return branch;
    }
    if (++successes >= config.grow_after && h < config.h) {
      h = std::min(2.0 * h, config.h);
      successes = 0;
    }
  }
}

std::vector<ContinuationPoint> sample_branch(const Branch& branch, std::span<const double> targets,
                                             HeightMeasure measure, const NewtonOptions& options) {
  if (branch.points.empty()) throw RangeError("branch has no points", 0.0, 0.0);
  auto height_of = [measure](const PointSummary& s) {
    return measure == HeightMeasure::Primary ? s.waveheight : s.companion_height;
  };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : branch.summaries) {
    lo = std::min(lo, height_of(s));
    hi = std::max(hi, height_of(s));
  }
  if (!(lo <= hi)) throw RangeError("branch has no heights for this measure", lo, hi);

  std::unique_ptr<ProfileSystem> system;
  std::vector<ContinuationPoint> out;
  for (double target : targets) {
    if (!(target >= lo && target <= hi)) {
      std::ostringstream msg;
      msg << "target height " << target << " outside attainable interval [" << lo << ", " << hi << "]";
      throw RangeError(msg.str(), lo, hi);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < branch.summaries.size(); ++i) {
      if (std::abs(height_of(branch.summaries[i]) - target) <
          std::abs(height_of(branch.summaries[best]) - target)) {
        best = i;
      }
    }
    if (height_of(branch.summaries[best]) == target) {
      out.push_back(branch.points[best]);
      continue;
    }
    if (!system) {
      system = std::make_unique<ProfileSystem>(branch.model, CosineGrid(branch.kappa, branch.n_points));
    }
    AugmentedSystem aug{system.get(), fixed_height(*system, target, measure)};
    out.push_back(newton_correct(aug, branch.points[best].as_vector(), options).point);
  }
  return out;
}

ContinuationPoint refine_resolution(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                                    int n_points, double target, HeightMeasure measure,
                                    const NewtonOptions& options) {
  CosineGrid old_grid(kappa, static_cast<int>(point.values.size()));
  CosineGrid new_grid(kappa, n_points);
  const auto series = resize_series(forward_cosine(point.values, old_grid, TransformPath::Fast), n_points);
  const auto values = inverse_cosine(series, new_grid, TransformPath::Fast);
  ProfileSystem system(model, new_grid);
  Eigen::VectorXd y(n_points + 1);
  y[0] = point.c;
  for (int i = 0; i < n_points; ++i) y[i + 1] = values[i];
  AugmentedSystem aug{&system, fixed_height(system, target, measure)};
  return newton_correct(aug, y, options).point;
}

}  // namespace whitham
