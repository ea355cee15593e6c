#include "whitham/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "whitham/error.hpp"

namespace whitham {

namespace {

void require_grid_size(std::size_t n, const CosineGrid& grid, const char* what) {
  if (n != static_cast<std::size_t>(grid.size())) {
    throw InputShapeError(std::string(what) + ": got " + std::to_string(n) +
                          " entries for a grid of " + std::to_string(grid.size()) + " points");
  }
}

double weight(int n, int n_points) { return n == 0 ? 1.0 / n_points : 2.0 / n_points; }

// FFTW r2r plans are created per call with FFTW_ESTIMATE; planning under
// ESTIMATE does not touch the arrays, but the planner itself is not
// re-entrant.
std::vector<double> fftw_r2r(std::vector<double> in, fftw_r2r_kind kind) {
  const int n = static_cast<int>(in.size());
  std::vector<double> out(in.size());
  fftw_plan plan = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

double khat(double xi) {
  const double a = std::abs(xi);
  if (a < 1e-4) {
    const double x2 = a * a;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
  }
  return std::tanh(a) / a;
}

CosineGrid::CosineGrid(double kappa, int n_points) : kappa_(kappa), n_(n_points) {
  if (!(kappa > 0.0)) throw InputShapeError("wavenumber must be positive");
  if (n_points < 1) throw InputShapeError("grid needs at least one point");
  points_.resize(n_);
  for (int i = 1; i <= n_; ++i) {
    points_[i - 1] = (2.0 * i - 1.0) * std::numbers::pi / (2.0 * kappa_ * n_);
  }
  cos_table_.resize(4 * static_cast<std::size_t>(n_));
  for (int k = 0; k < 4 * n_; ++k) {
    cos_table_[k] = std::cos(std::numbers::pi * k / (2.0 * n_));
  }
}

double CosineGrid::half_period() const noexcept { return std::numbers::pi / kappa_; }

double CosineGrid::cos_step(long long k) const {
  k %= 4LL * n_;
  if (k < 0) k += 4LL * n_;
  return cos_table_[static_cast<std::size_t>(k)];
}

double CosineGrid::cos_nx(int n, int i) const {
  return cos_step(static_cast<long long>(n) * (2 * i + 1));
}

double CosineCoefficients::evaluate(double x) const {
  double s = 0.0;
  for (int n = 0; n < size(); ++n) s += coeffs[n] * std::cos(n * kappa * x);
  return s;
}

CosineCoefficients forward_cosine(std::span<const double> values, const CosineGrid& grid,
                                  TransformPath path) {
  require_grid_size(values.size(), grid, "forward_cosine");
  const int n_pts = grid.size();
  CosineCoefficients out{grid.kappa(), std::vector<double>(n_pts, 0.0)};
  if (path == TransformPath::Fast) {
    auto y = fftw_r2r(std::vector<double>(values.begin(), values.end()), FFTW_REDFT10);
    for (int n = 0; n < n_pts; ++n) out.coeffs[n] = 0.5 * weight(n, n_pts) * y[n];
    return out;
  }
  for (int n = 0; n < n_pts; ++n) {
    double s = 0.0;
    for (int i = 0; i < n_pts; ++i) s += values[i] * grid.cos_nx(n, i);
    out.coeffs[n] = weight(n, n_pts) * s;
  }
  return out;
}

std::vector<double> inverse_cosine(const CosineCoefficients& coeffs, const CosineGrid& grid,
                                   TransformPath path) {
  require_grid_size(coeffs.coeffs.size(), grid, "inverse_cosine");
  const int n_pts = grid.size();
  if (path == TransformPath::Fast) {
    std::vector<double> x(coeffs.coeffs);
    for (int n = 1; n < n_pts; ++n) x[n] *= 0.5;
    return fftw_r2r(std::move(x), FFTW_REDFT01);
  }
  std::vector<double> out(n_pts, 0.0);
  for (int i = 0; i < n_pts; ++i) {
    double s = 0.0;
    for (int n = 0; n < n_pts; ++n) s += coeffs.coeffs[n] * grid.cos_nx(n, i);
    out[i] = s;
  }
  return out;
}

CosineCoefficients apply_K(const CosineCoefficients& coeffs) {
  CosineCoefficients out = coeffs;
  for (int n = 1; n < out.size(); ++n) out.coeffs[n] *= khat(coeffs.kappa * n);
  return out;
}

std::vector<double> apply_K_on_grid(std::span<const double> values, const CosineGrid& grid,
                                    TransformPath path) {
  return inverse_cosine(apply_K(forward_cosine(values, grid, path)), grid, path);
}

Eigen::MatrixXd collocation_K_matrix(const CosineGrid& grid) {
  const int n_pts = grid.size();
  // K_N = C^T diag(w khat) C with C(n, i) = cos(n kappa x_i).
  Eigen::MatrixXd cos_mat(n_pts, n_pts);
  for (int n = 0; n < n_pts; ++n)
    for (int i = 0; i < n_pts; ++i) cos_mat(n, i) = grid.cos_nx(n, i);
  Eigen::VectorXd diag(n_pts);
  for (int n = 0; n < n_pts; ++n) diag[n] = weight(n, n_pts) * khat(grid.kappa() * n);
  Eigen::MatrixXd k_mat = cos_mat.transpose() * diag.asDiagonal() * cos_mat;
  // Symmetric by construction; remove the last-bit asymmetry of the product.
  return 0.5 * (k_mat + k_mat.transpose());
}

std::vector<double> derivative_on_grid(const CosineCoefficients& coeffs, const CosineGrid& grid) {
  require_grid_size(coeffs.coeffs.size(), grid, "derivative_on_grid");
  const int n_pts = grid.size();
  std::vector<double> out(n_pts, 0.0);
  for (int i = 0; i < n_pts; ++i) {
    double s = 0.0;
    for (int n = 1; n < n_pts; ++n) {
      // sin(theta) = cos(theta - pi/2); shift the angle index by N (mod 4N).
      const double sin_nx = grid.cos_step(static_cast<long long>(n) * (2 * i + 1) + 3LL * n_pts);
      s -= n * grid.kappa() * coeffs.coeffs[n] * sin_nx;
    }
    out[i] = s;
  }
  return out;
}

std::vector<std::complex<double>> exp_fourier_coeffs(std::span<const double> values,
                                                     const CosineGrid& grid, int n_max) {
  require_grid_size(values.size(), grid, "exp_fourier_coeffs");
  if (n_max < 0 || n_max >= grid.size()) {
    throw ResolutionError("exp_fourier_coeffs: n_max = " + std::to_string(n_max) +
                          " exceeds quadrature resolution N = " + std::to_string(grid.size()));
  }
  const int n_pts = grid.size();
  std::vector<std::complex<double>> out(2 * static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n) {
    double s = 0.0;
    for (int m = 0; m < n_pts; ++m) s += values[m] * grid.cos_nx(n, m);
    s /= n_pts;
    out[n_max + n] = s;
    out[n_max - n] = s;
  }
  return out;
}

CosineCoefficients resize_series(const CosineCoefficients& coeffs, int n) {
  CosineCoefficients out{coeffs.kappa, std::vector<double>(n, 0.0)};
  for (int k = 0; k < std::min(n, coeffs.size()); ++k) out.coeffs[k] = coeffs.coeffs[k];
  return out;
}

}  // namespace whitham
