#pragma once

// Discretized profile equation f_i(c, phi) = g(c, phi_i) - (K phi)_N(x_i) on
// the collocation grid, its Jacobian, and Newton solves of the system
// augmented by one scalar constraint.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "whitham/models.hpp"
#include "whitham/transforms.hpp"

namespace whitham {

/// y = (c, phi_1, ..., phi_N) with the max-norm of f at y.
struct ContinuationPoint {
  double c = 0.0;
  std::vector<double> values;
  double residual_norm = 0.0;

  Eigen::VectorXd as_vector() const;
  static ContinuationPoint from_vector(const Eigen::VectorXd& y);
};

enum class JacobianMode { Analytic, FiniteDifference };

/// f(y) for one point, with (K phi)_N evaluated through the cosine transforms.
Eigen::VectorXd residual(const Model& model, const ContinuationPoint& point, const CosineGrid& grid);

/// N x (N+1) Jacobian; column 0 is df/dc.
Eigen::MatrixXd jacobian(const Model& model, const ContinuationPoint& point, const CosineGrid& grid);

/// Caches the collocation matrix of K for repeated residual/Jacobian
/// evaluations on one grid.
class ProfileSystem {
 public:
  ProfileSystem(ModelPtr model, CosineGrid grid, JacobianMode mode = JacobianMode::Analytic);

  const Model& model() const noexcept { return *model_; }
  const ModelPtr& model_ptr() const noexcept { return model_; }
  const CosineGrid& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.size(); }
  const Eigen::MatrixXd& k_matrix() const noexcept { return k_; }

  Eigen::VectorXd residual(const Eigen::VectorXd& y) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& y) const;

  /// phi_N(0) and phi_N(pi/kappa) as linear functionals of the grid values.
  double value_at_crest(const Eigen::VectorXd& y) const;
  double value_at_trough(const Eigen::VectorXd& y) const;
  const Eigen::VectorXd& crest_weights() const noexcept { return crest_; }
  const Eigen::VectorXd& trough_weights() const noexcept { return trough_; }

 private:
  ModelPtr model_;
  CosineGrid grid_;
  JacobianMode mode_;
  Eigen::MatrixXd k_;
  Eigen::VectorXd crest_;
  Eigen::VectorXd trough_;
};

/// Scalar constraint h(y) = 0 appended to f(y) = 0.
struct Constraint {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;

  /// z . (y - y_p) = 0
  static Constraint arclength(Eigen::VectorXd tangent, Eigen::VectorXd predictor);
  /// c = c_fixed
  static Constraint fixed_speed(double c_fixed, int n_points);
};

struct AugmentedSystem {
  const ProfileSystem* base = nullptr;
  Constraint constraint;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iterations = 25;
};

struct NewtonResult {
  ContinuationPoint point;
  Eigen::VectorXd y;
  int iterations = 0;
  std::vector<double> residual_history;  // max-norm of [f; h] per iterate
};

/// Newton on the (N+1)-square system [f(y); h(y)] = 0.
/// Throws CorrectorFailure on divergence or when the iteration cap is hit.
NewtonResult newton_correct(const AugmentedSystem& system, Eigen::VectorXd y_start,
                            const NewtonOptions& options = {});

/// Unit z with Df z = 0 and z . z_prev > 0, from [Df; z_prev^T] z = [0; 1].
/// Throws TangentFailure if the bordered matrix is singular.
Eigen::VectorXd tangent_solve(const Eigen::MatrixXd& jac, const Eigen::VectorXd& z_prev);

/// Waveheight phi_N(0) - phi_N(pi/kappa) of the primary profile.
double waveheight(const ProfileSystem& system, const Eigen::VectorXd& y);

/// Same quantity for the companion profile; requires a pointwise companion.
double companion_waveheight(const ProfileSystem& system, const Eigen::VectorXd& y);

enum class HeightMeasure { Primary, Companion };

/// h(y) = height(y) - target for the chosen measure.
Constraint fixed_height(const ProfileSystem& system, double target, HeightMeasure measure);

}  // namespace whitham
