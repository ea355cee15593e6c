#include "whitham/profile_solver.hpp"

#include <cmath>
#include <string>

#include "whitham/error.hpp"

namespace whitham {

Eigen::VectorXd ContinuationPoint::as_vector() const {
  Eigen::VectorXd y(values.size() + 1);
  y[0] = c;
  for (std::size_t i = 0; i < values.size(); ++i) y[i + 1] = values[i];
  return y;
}

ContinuationPoint ContinuationPoint::from_vector(const Eigen::VectorXd& y) {
  ContinuationPoint p;
  p.c = y[0];
  p.values.assign(y.data() + 1, y.data() + y.size());
  return p;
}

namespace {

void require_match(const ContinuationPoint& point, const CosineGrid& grid) {
  if (point.values.size() != static_cast<std::size_t>(grid.size())) {
    throw InputShapeError("point has " + std::to_string(point.values.size()) +
                          " values, grid has " + std::to_string(grid.size()));
  }
}

}  // namespace

Eigen::VectorXd residual(const Model& model, const ContinuationPoint& point, const CosineGrid& grid) {
  require_match(point, grid);
  const auto k_phi = apply_K_on_grid(point.values, grid);
  Eigen::VectorXd f(grid.size());
  for (int i = 0; i < grid.size(); ++i) f[i] = model.g(point.c, point.values[i]) - k_phi[i];
  return f;
}

Eigen::MatrixXd jacobian(const Model& model, const ContinuationPoint& point, const CosineGrid& grid) {
  require_match(point, grid);
  const int n = grid.size();
  Eigen::MatrixXd jac(n, n + 1);
  jac.rightCols(n) = -collocation_K_matrix(grid);
  for (int i = 0; i < n; ++i) {
    jac(i, 0) = model.dg_dc(point.c, point.values[i]);
    jac(i, i + 1) += model.dg_dv(point.c, point.values[i]);
  }
  return jac;
}

ProfileSystem::ProfileSystem(ModelPtr model, CosineGrid grid, JacobianMode mode)
    : model_(std::move(model)), grid_(std::move(grid)), mode_(mode) {
  k_ = collocation_K_matrix(grid_);
  const int n = grid_.size();
  crest_ = Eigen::VectorXd::Zero(n);
  trough_ = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double s0 = 0.0, s1 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = (k == 0 ? 1.0 : 2.0) / n;
      const double cx = grid_.cos_nx(k, i);
      s0 += w * cx;
      s1 += (k % 2 == 0 ? w : -w) * cx;
    }
    crest_[i] = s0;
    trough_[i] = s1;
  }
}

Eigen::VectorXd ProfileSystem::residual(const Eigen::VectorXd& y) const {
  const int n = size();
  const double c = y[0];
  Eigen::VectorXd f = -(k_ * y.tail(n));
  for (int i = 0; i < n; ++i) f[i] += model_->g(c, y[i + 1]);
  return f;
}

Eigen::MatrixXd ProfileSystem::jacobian(const Eigen::VectorXd& y) const {
  const int n = size();
  if (mode_ == JacobianMode::FiniteDifference) {
    Eigen::MatrixXd jac(n, n + 1);
    for (int j = 0; j <= n; ++j) {
      const double step = 1e-7 * std::max(1.0, std::abs(y[j]));
      Eigen::VectorXd yp = y, ym = y;
      yp[j] += step;
      ym[j] -= step;
      jac.col(j) = (residual(yp) - residual(ym)) / (2.0 * step);
    }
    return jac;
  }
  const double c = y[0];
  Eigen::MatrixXd jac(n, n + 1);
  jac.rightCols(n) = -k_;
  for (int i = 0; i < n; ++i) {
    jac(i, 0) = model_->dg_dc(c, y[i + 1]);
    jac(i, i + 1) += model_->dg_dv(c, y[i + 1]);
  }
  return jac;
}

double ProfileSystem::value_at_crest(const Eigen::VectorXd& y) const {
  return crest_.dot(y.tail(size()));
}

double ProfileSystem::value_at_trough(const Eigen::VectorXd& y) const {
  return trough_.dot(y.tail(size()));
}

Constraint Constraint::arclength(Eigen::VectorXd tangent, Eigen::VectorXd predictor) {
  Constraint con;
  con.value = [tangent, predictor](const Eigen::VectorXd& y) { return tangent.dot(y - predictor); };
  con.gradient = [tangent](const Eigen::VectorXd&) { return tangent; };
  return con;
}

Constraint Constraint::fixed_speed(double c_fixed, int n_points) {
  Constraint con;
  con.value = [c_fixed](const Eigen::VectorXd& y) { return y[0] - c_fixed; };
  con.gradient = [n_points](const Eigen::VectorXd&) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(n_points + 1);
    g[0] = 1.0;
    return g;
  };
  return con;
}

NewtonResult newton_correct(const AugmentedSystem& system, Eigen::VectorXd y_start,
                            const NewtonOptions& options) {
  const ProfileSystem& base = *system.base;
  const int n = base.size();
  if (y_start.size() != n + 1) {
    throw InputShapeError("newton_correct: start vector has wrong length");
  }
  NewtonResult result;
  Eigen::VectorXd y = std::move(y_start);
  Eigen::VectorXd rhs(n + 1);
  Eigen::MatrixXd a(n + 1, n + 1);

  auto fail = [&](const std::string& why) {
    std::vector<double> last(y.data(), y.data() + y.size());
    throw CorrectorFailure("Newton corrector failed: " + why, std::move(last),
                           result.residual_history);
  };

  for (int it = 0;; ++it) {
    try {
      rhs.head(n) = base.residual(y);
      rhs[n] = system.constraint.value(y);
    } catch (const SingularInputError& e) {
      fail(e.what());
    }
    const double rnorm = rhs.lpNorm<Eigen::Infinity>();
    result.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) fail("non-finite residual");
    if (rnorm <= options.tol) {
      result.iterations = it;
      result.point = ContinuationPoint::from_vector(y);
      result.point.residual_norm = rhs.head(n).lpNorm<Eigen::Infinity>();
      result.y = std::move(y);
      return result;
    }
    if (it >= options.max_iterations) fail("iteration cap reached");
    if (it >= 3 && rnorm > 1e3 * result.residual_history.front()) fail("diverging");

    a.topRows(n) = base.jacobian(y);
    a.row(n) = system.constraint.gradient(y).transpose();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd dy = lu.solve(-rhs);
    if (!dy.allFinite()) fail("singular Newton matrix");
    y += dy;
  }
}

Eigen::VectorXd tangent_solve(const Eigen::MatrixXd& jac, const Eigen::VectorXd& z_prev) {
  const auto n = jac.rows();
  if (jac.cols() != n + 1 || z_prev.size() != n + 1) {
    throw InputShapeError("tangent_solve: expected N x (N+1) Jacobian and (N+1) direction");
  }
  Eigen::MatrixXd a(n + 1, n + 1);
  a.topRows(n) = jac;
  a.row(n) = z_prev.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::VectorXd z = lu.solve(rhs);
  const double norm = z.norm();
  if (!z.allFinite() || norm == 0.0 || lu.rcond() < 1e-15) {
    throw TangentFailure("bordered tangent system is singular");
  }
  z /= norm;
  if (z.dot(z_prev) < 0.0) z = -z;
  return z;
}

double waveheight(const ProfileSystem& system, const Eigen::VectorXd& y) {
  return system.value_at_crest(y) - system.value_at_trough(y);
}

double companion_waveheight(const ProfileSystem& system, const Eigen::VectorXd& y) {
  const Model& m = system.model();
  const double c = y[0];
  return m.companion_at(c, system.value_at_crest(y)) - m.companion_at(c, system.value_at_trough(y));
}

Constraint fixed_height(const ProfileSystem& system, double target, HeightMeasure measure) {
  const ProfileSystem* sys = &system;
  Constraint con;
  if (measure == HeightMeasure::Primary) {
    con.value = [sys, target](const Eigen::VectorXd& y) { return waveheight(*sys, y) - target; };
    con.gradient = [sys](const Eigen::VectorXd&) {
      Eigen::VectorXd g(sys->size() + 1);
      g[0] = 0.0;
      g.tail(sys->size()) = sys->crest_weights() - sys->trough_weights();
      return g;
    };
    return con;
  }
  if (!system.model().has_pointwise_companion()) {
    throw ConfigError("companion waveheight is not defined for model " +
                      std::string(to_string(system.model().id())));
  }
  con.value = [sys, target](const Eigen::VectorXd& y) {
    return companion_waveheight(*sys, y) - target;
  };
  con.gradient = [sys](const Eigen::VectorXd& y) {
    const Model& m = sys->model();
    const double c = y[0];
    const double top = sys->value_at_crest(y);
    const double bottom = sys->value_at_trough(y);
    Eigen::VectorXd g(sys->size() + 1);
    g[0] = m.companion_dc(c, top) - m.companion_dc(c, bottom);
    g.tail(sys->size()) =
        m.companion_dv(c, top) * sys->crest_weights() - m.companion_dv(c, bottom) * sys->trough_weights();
    return g;
  };
  return con;
}

}  // namespace whitham
