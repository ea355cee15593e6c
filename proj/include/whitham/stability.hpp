#pragma once

// Fourier-Floquet-Hill spectra of the linearization about a periodic wave.

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "whitham/models.hpp"
#include "whitham/profile_solver.hpp"

namespace whitham {

struct StabilityThresholds {
  double tol_grow = 1e-6;
  double r_origin = 0.05;
  double mu_mod = 0.1;
  /// At mu = 0, eigenvalues with |lambda| below this belong to the
  /// translation kernel and are ignored by the co-periodic flag.
  double kernel_radius = 1e-3;
};

/// Exponential Fourier data of a wave: velocity and height coefficients
/// for |n| <= n_coeff.
struct BlochProfile {
  ModelPtr model;
  double kappa = 1.0;
  double c = 0.0;
  int n_points = 0;
  int n_coeff = 0;
  std::vector<cplx> u_hat;
  std::vector<cplx> eta_hat;
};

/// Coefficients are kept for |n| <= min(2 n_modes, n_points - 1).
/// Throws ResolutionError when n_modes >= n_points.
BlochProfile prepare_profile(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                             int n_modes);

struct BlochMatrix {
  double mu = 0.0;
  int n_modes = 0;
  Eigen::MatrixXcd entries;  // (4N+2) x (4N+2), blocks [[A, B], [C, D]]
};

/// out(m) = sum_l fhat(m - l) vt(l); fhat indexed -nf..nf, vt and out -nv..nv.
std::vector<cplx> bloch_coeff_product(std::span<const cplx> fhat, std::span<const cplx> vt);

BlochMatrix assemble_bloch_matrix(const BlochProfile& profile, double mu, int n_modes);
BlochMatrix assemble_bloch_matrix(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                                  double mu, int n_modes);

/// Bloch vector of the translation mode (i kappa n u_hat, i kappa n eta_hat)
/// at mu = 0.
Eigen::VectorXcd translation_mode(const BlochProfile& profile, int n_modes);

struct SpectrumSlice {
  double mu = 0.0;
  std::vector<cplx> eigenvalues;  // sorted by (real, imag)
  double max_growth = 0.0;
};

/// All eigenvalues of the dense matrix. Throws EigenError on non-convergence.
SpectrumSlice eigenvalues(const BlochMatrix& matrix);

struct InstabilityFlags {
  bool modulational = false;
  bool high_frequency = false;
  bool coperiodic = false;
};

struct SweepOptions {
  double dmu = 1.0 / 500.0;
  int workers = 1;
  /// Largest mu included; slices above it are skipped. 1 keeps the full mesh.
  double mu_max = 1.0;
  StabilityThresholds thresholds;
};

struct SpectrumSweep {
  int n_modes = 0;
  double dmu = 0.0;
  std::vector<SpectrumSlice> slices;  // mu_j = j dmu, j = 0..1/dmu - 1 (up to mu_max)
  bool full_mesh = true;
  StabilityThresholds thresholds;
  InstabilityFlags flags;
};

/// Throws ConfigError unless 1/dmu is an integer.
SpectrumSweep sweep(const BlochProfile& profile, int n_modes, const SweepOptions& options = {});
SpectrumSweep sweep(const ModelPtr& model, double kappa, const ContinuationPoint& point, int n_modes,
                    const SweepOptions& options = {});

/// (mu, max real part) per slice.
std::vector<std::pair<double, double>> growth_rate_curve(const SpectrumSweep& sweep);

InstabilityFlags classify(const SpectrumSweep& sweep, const StabilityThresholds& thresholds);

}  // namespace whitham
