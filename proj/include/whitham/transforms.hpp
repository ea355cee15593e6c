#pragma once

// Dispersion symbol and the cosine-collocation transform pair on midpoint
// nodes of the half period [0, pi/kappa].

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace whitham {

/// Symbol of K: tanh(xi)/xi, extended by 1 at xi = 0. Even in xi.
double khat(double xi);

/// Midpoint collocation nodes x_i = (2i-1) pi / (2 kappa N), i = 1..N.
class CosineGrid {
 public:
  CosineGrid(double kappa, int n_points);

  double kappa() const noexcept { return kappa_; }
  int size() const noexcept { return n_; }
  const std::vector<double>& points() const noexcept { return points_; }
  double half_period() const noexcept;

  /// cos(n kappa x_i) for 0 <= n < 4N, computed by exact integer angle
  /// reduction so that symmetric entries agree bit for bit.
  double cos_nx(int n, int i) const;
  /// cos(pi k / (2N)) for any integer k.
  double cos_step(long long k) const;

 private:
  double kappa_;
  int n_;
  std::vector<double> points_;
  std::vector<double> cos_table_;  // cos(pi k / (2N)), k = 0..4N-1
};

/// Truncated cosine series sum_n coeffs[n] cos(n kappa x).
struct CosineCoefficients {
  double kappa = 1.0;
  std::vector<double> coeffs;

  int size() const noexcept { return static_cast<int>(coeffs.size()); }
  /// Evaluate the truncated series at an arbitrary abscissa.
  double evaluate(double x) const;
};

enum class TransformPath { Direct, Fast };

/// c(n) = w(n) sum_i values_i cos(n kappa x_i), w(0) = 1/N, w(n>0) = 2/N.
CosineCoefficients forward_cosine(std::span<const double> values, const CosineGrid& grid,
                                  TransformPath path = TransformPath::Direct);

/// Grid values of sum_{n<N} c(n) cos(n kappa x_i).
std::vector<double> inverse_cosine(const CosineCoefficients& coeffs, const CosineGrid& grid,
                                   TransformPath path = TransformPath::Direct);

/// Multiplies coefficient n by khat(kappa n).
CosineCoefficients apply_K(const CosineCoefficients& coeffs);

/// (K phi)_N at the grid points.
std::vector<double> apply_K_on_grid(std::span<const double> values, const CosineGrid& grid,
                                    TransformPath path = TransformPath::Direct);

/// Dense N x N matrix of phi -> (K phi)_N on the grid,
/// K_N(i,j) = sum_n w(n) khat(kappa n) cos(n kappa x_i) cos(n kappa x_j).
Eigen::MatrixXd collocation_K_matrix(const CosineGrid& grid);

/// d/dx of the series, evaluated on the grid (a sine series).
std::vector<double> derivative_on_grid(const CosineCoefficients& coeffs, const CosineGrid& grid);

/// Exponential-basis Fourier coefficients of an even function sampled on the
/// grid, phi(n) ~ (1/N) sum_m values_m cos(n kappa x_m), returned for
/// n = -n_max..n_max (index n + n_max). Refuses n_max >= N.
std::vector<std::complex<double>> exp_fourier_coeffs(std::span<const double> values,
                                                     const CosineGrid& grid, int n_max);

/// Zero-pad or truncate a cosine series to `n` terms.
CosineCoefficients resize_series(const CosineCoefficients& coeffs, int n);

}  // namespace whitham
