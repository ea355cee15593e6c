#pragma once

// The three bidirectional Whitham models (plus the positive-height branch of
// the first) reduced to a scalar profile equation K v = g(c, v).

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "whitham/transforms.hpp"

namespace whitham {

using cplx = std::complex<double>;

enum class ModelId { EjZero, EjPositive, Hp, Bw };

std::string_view to_string(ModelId id);
/// Accepts the CLI ids "ej", "ej-positive", "hp", "bw".
ModelId parse_model_id(std::string_view name);

/// Small-amplitude expansion of a bifurcation branch, parameterized by eps.
struct LocalSeed {
  std::function<double(double)> c_of_eps;
  std::function<double(double, double)> profile_of_eps;  // (x, eps)
  std::function<double(double)> dc_deps;
  std::function<double(double, double)> dprofile_deps;  // (x, eps)
  double eps0 = 1e-5;
  /// False when c_of_eps is only the bifurcation speed (no eps^2 term).
  bool speed_second_order = true;
};

/// Exponential Fourier data of the wave consumed by the Bloch blocks. `u` is
/// the velocity profile and `eta` the height profile, whichever of them the
/// model solves for; both are indexed -n_max..n_max.
struct BlochContext {
  double kappa = 1.0;
  double c = 0.0;
  double mu = 0.0;
  int n_max = 0;
  std::span<const cplx> u_hat;
  std::span<const cplx> eta_hat;

  cplx u(int n) const { return std::abs(n) <= n_max ? u_hat[n + n_max] : cplx{}; }
  cplx eta(int n) const { return std::abs(n) <= n_max ? eta_hat[n + n_max] : cplx{}; }
};

/// Entries (m, l) of the four blocks of the Bloch operator.
struct BlochEntry {
  cplx a, b, c, d;
};

class Model {
 public:
  virtual ~Model() = default;

  virtual ModelId id() const = 0;
  virtual double g(double c, double v) const = 0;
  virtual double dg_dv(double c, double v) const = 0;
  virtual double dg_dc(double c, double v) const = 0;

  /// Companion profile on the collocation grid: the height for EJ/BW, the
  /// velocity for HP.
  virtual std::vector<double> companion(double c, std::span<const double> values,
                                        const CosineGrid& grid) const = 0;

  /// Exponential Fourier coefficients of the companion for |n| <= n_coeff.
  /// The default transforms `companion` and so assumes it is even.
  virtual std::vector<cplx> companion_fourier(double c, std::span<const double> values,
                                              const CosineGrid& grid, int n_coeff) const;

  /// Pointwise companion map and its partials, where the companion is a
  /// function of the primary value alone (EJ, HP).
  virtual bool has_pointwise_companion() const { return false; }
  virtual double companion_at(double c, double v) const;
  virtual double companion_dv(double c, double v) const;
  virtual double companion_dc(double c, double v) const;

  /// Amplitude at which smoothness is expected to break; nullopt if none.
  virtual std::optional<double> termination_bound(double c) const = 0;

  virtual LocalSeed seed(double kappa) const = 0;

  /// Constant state the branch bifurcates from (0, or phi_* for EJ_POSITIVE).
  virtual double base_state(double /*kappa*/) const { return 0.0; }

  /// True if the profile solved for is the velocity u (EJ, BW); false if it
  /// is the height eta (HP).
  virtual bool primary_is_velocity() const { return true; }

  virtual BlochEntry bloch_entry(const BlochContext& ctx, int m, int l) const = 0;
};

using ModelPtr = std::shared_ptr<const Model>;

/// `n0` selects the harmonic for EJ_POSITIVE and is ignored otherwise.
ModelPtr make_model(ModelId id, int n0 = 1);

/// sqrt(khat(xi)): linear wavespeed of mode xi.
double linear_speed(double xi);

/// Smoothness bound c (1 - 1/sqrt(3)) for the EJ profile equation.
double ej_amplitude_bound(double c);

/// Trivial constant states Gamma_pm(c) = (3c pm sqrt(8 + c^2)) / 2.
double ej_gamma_minus(double c);
double ej_gamma_plus(double c);

struct BranchPoint {
  double c_star;
  double phi_star;
};

/// Solves { c^2 - 1 - 3/2 c phi + 1/2 phi^2 = 0,
///          khat(kappa n0) - c^2 + 3 c phi - 3/2 phi^2 = 0 } for c > 0
/// by damped Newton; both residuals end below 1e-12.
BranchPoint solve_positive_branch_point(double kappa, int n0);

LocalSeed ej_local_seed(double kappa);
LocalSeed ej_positive_local_seed(double kappa, int n0);
LocalSeed bw_local_seed(double kappa);
LocalSeed hp_local_seed(double kappa);

/// Quadratic coefficient c2 in c(a) = c_* + c2 a^2 on the positive branch.
double ej_positive_c2(double kappa, int n0);

}  // namespace whitham
