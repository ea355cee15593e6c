#pragma once

// Pseudo-arclength continuation of a bifurcation branch from its local seed.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "whitham/models.hpp"
#include "whitham/profile_solver.hpp"

namespace whitham {

enum class StopReason { AmplitudeBound, MaxHeight, MaxSteps, CorrectorFailure };

std::string_view to_string(StopReason reason);

struct ContinuationConfig {
  double kappa = 1.0;
  int n_points = 256;
  double h = 1e-3;
  double eps0 = 1e-5;
  int max_steps = 200000;
  /// Stop once the primary waveheight reaches this value.
  std::optional<double> max_height;
  /// Stop when the maximum reaches (1 - bound_standoff) times the model bound.
  double bound_standoff = 1e-3;
  int max_halvings = 6;
  /// Consecutive successes before the step is doubled back towards h.
  int grow_after = 5;
  NewtonOptions newton;
  JacobianMode jacobian = JacobianMode::Analytic;
  /// Called after every accepted point with (step index, point summary c, height).
  std::function<void(std::size_t, double, double)> progress;
};

/// Validates h, eps0, n_points; throws ConfigError.
void validate(const ContinuationConfig& config);

struct PointSummary {
  double c = 0.0;
  double waveheight = 0.0;
  double max_value = 0.0;
  double min_value = 0.0;
  /// NaN when the model has no pointwise companion.
  double companion_height = 0.0;
};

PointSummary summarize(const ProfileSystem& system, const Eigen::VectorXd& y);

struct Branch {
  ModelPtr model;
  double kappa = 1.0;
  int n_points = 0;
  std::vector<ContinuationPoint> points;
  std::vector<PointSummary> summaries;
  /// c-component of the unit tangent at each accepted point.
  std::vector<double> tangent_dc;
  StopReason stop_reason = StopReason::MaxSteps;
  std::string stop_detail;
  /// Indices i with tangent_dc changing sign between points i-1 and i.
  std::vector<std::size_t> folds;

  std::size_t size() const noexcept { return points.size(); }
};

struct SeedResult {
  ContinuationPoint point;
  Eigen::VectorXd y;
  Eigen::VectorXd tangent;
};

/// Evaluates the local seed at eps0, corrects at fixed c = c(eps0) and
/// returns the corrected point with its unit tangent oriented along the seed
/// derivative. Throws SeedError when the corrector fails.
SeedResult seed_branch(const ProfileSystem& system, const ContinuationConfig& config);

Branch continue_branch(ModelPtr model, const ContinuationConfig& config);

/// For each target height, the nearest accepted point refined by a
/// fixed-height Newton solve. Throws RangeError for targets outside the
/// branch's height range.
std::vector<ContinuationPoint> sample_branch(const Branch& branch, std::span<const double> targets,
                                             HeightMeasure measure = HeightMeasure::Primary,
                                             const NewtonOptions& options = {});

/// Re-solve a point at a different resolution: the cosine series is padded or
/// truncated to n_points and corrected at the given height.
ContinuationPoint refine_resolution(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                                    int n_points, double target, HeightMeasure measure,
                                    const NewtonOptions& options = {});

}  // namespace whitham
