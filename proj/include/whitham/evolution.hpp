#pragma once

// Pseudospectral time stepping of the EJ system
//   u_t + eta_x + u u_x = 0,   eta_t + (K u)_x + (eta u)_x = 0
// on a full period, by composing the exact linear flow with RK4 steps of the
// nonlinear remainder.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "whitham/models.hpp"
#include "whitham/profile_solver.hpp"

namespace whitham {

/// Fields on the uniform grid x_j = j L / M, L = 2 pi / kappa, j = 0..M-1.
struct EvolutionState {
  double t = 0.0;
  double kappa = 1.0;
  std::vector<double> u;
  std::vector<double> eta;

  int size() const noexcept { return static_cast<int>(u.size()); }
  double dx() const;
};

/// Palindromic composition of symmetric second-order steps
/// L(w dt / 2) N(w dt) L(w dt / 2), one weight per stage.
struct SplittingScheme {
  std::vector<double> weights;
  double dt = 1e-3;
  /// RK4 steps taken per nonlinear stage.
  int nonlinear_substeps = 1;

  /// Yoshida's sixth-order solution A.
  static SplittingScheme yoshida6(double dt);
  static SplittingScheme strang(double dt);
};

/// Full-period state M = 2 n_points from an EJ branch point: u = phi and
/// eta = psi, both sampled from the cosine series. Throws ConfigError for
/// other models.
EvolutionState state_from_point(const ModelPtr& model, double kappa, const ContinuationPoint& point);

/// Exact flow of u_t = -eta_x, eta_t = -(K u)_x. Mode 0 and the Nyquist mode
/// are left unchanged. Throws InputShapeError for odd or mismatched M.
EvolutionState linear_step(const EvolutionState& state, double dt);

/// One RK4 step of u_t = -u u_x, eta_t = -(eta u)_x with spectral
/// derivatives. Throws BlowUpError if a non-finite value appears.
EvolutionState nonlinear_step_rk4(const EvolutionState& state, double dt);

/// One macro step of the scheme.
EvolutionState split_step(const EvolutionState& state, const SplittingScheme& scheme);

/// Share of the spectral energy sum_n |f_n|^2 (one-sided, 0 <= n <= M/2)
/// carried by n > (1 - fraction) M / 2. Zero for a zero field.
double tail_energy(std::span<const double> field, double fraction);
/// Over both fields together.
double tail_energy(const EvolutionState& state, double fraction);

/// eta(x - c t), evaluated spectrally.
std::vector<double> translate(std::span<const double> field, double kappa, double shift);

struct Snapshot {
  double t = 0.0;
  /// L2 norm over one period of eta minus the translated initial eta; NaN
  /// when no wave speed was given.
  double l2_residual = 0.0;
  double max_norm = 0.0;
  double tail_energy = 0.0;
};

struct EvolutionOptions {
  /// Record a snapshot every this many macro steps (and at the end).
  int snapshot_every = 100;
  double tail_fraction = 0.25;
  double blowup_threshold = 1e6;
  /// Speed of the travelling wave used for the residual.
  std::optional<double> wave_speed;
};

struct EvolutionResult {
  EvolutionState final_state;
  std::vector<Snapshot> snapshots;
  long steps = 0;
  bool blew_up = false;
  double blowup_time = 0.0;
  std::string blowup_detail;
};

/// Steps to t_final with a shortened last step when dt does not divide the
/// interval. Stops early, keeping the partial trajectory, once the max-norm
/// exceeds the threshold or a value turns non-finite.
EvolutionResult evolve(const EvolutionState& initial, double t_final, const SplittingScheme& scheme,
                       const EvolutionOptions& options = {});

}  // namespace whitham
