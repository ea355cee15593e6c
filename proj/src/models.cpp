#include "whitham/models.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "whitham/error.hpp"

namespace whitham {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kResonanceTol = 1e-12;

double kron(int m, int l) { return m == l ? 1.0 : 0.0; }

// g, dg/dv, dg/dc for the EJ nonlinearity; shared by both EJ branches.
double ej_g(double c, double v) { return 0.5 * v * v * v - 1.5 * c * v * v + c * c * v; }
double ej_gv(double c, double v) { return 1.5 * v * v - 3.0 * c * v + c * c; }
double ej_gc(double c, double v) { return -1.5 * v * v + 2.0 * c * v; }

class EjModel : public Model {
 public:
  double g(double c, double v) const override { return ej_g(c, v); }
  double dg_dv(double c, double v) const override { return ej_gv(c, v); }
  double dg_dc(double c, double v) const override { return ej_gc(c, v); }

  std::vector<double> companion(double c, std::span<const double> values,
                                const CosineGrid&) const override {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = companion_at(c, values[i]);
    return out;
  }
  bool has_pointwise_companion() const override { return true; }
  double companion_at(double c, double v) const override { return c * v - 0.5 * v * v; }
  double companion_dv(double c, double v) const override { return c - v; }
  double companion_dc(double, double v) const override { return v; }

  std::optional<double> termination_bound(double c) const override {
    return ej_amplitude_bound(c);
  }

  BlochEntry bloch_entry(const BlochContext& ctx, int m, int l) const override {
    const double kl = ctx.kappa * (ctx.mu + l);
    const double km = ctx.kappa * (ctx.mu + m);
    const double d = kron(m, l);
    const cplx a = kI * ctx.c * kl * d - kI * km * ctx.u(m - l);
    return {a, -kI * kl * d, -kI * km * ctx.eta(m - l) - kI * kl * khat(kl) * d, a};
  }
};

class EjZeroModel final : public EjModel {
 public:
  ModelId id() const override { return ModelId::EjZero; }
  LocalSeed seed(double kappa) const override { return ej_local_seed(kappa); }
};

class EjPositiveModel final : public EjModel {
 public:
  explicit EjPositiveModel(int n0) : n0_(n0) {}
  ModelId id() const override { return ModelId::EjPositive; }
  LocalSeed seed(double kappa) const override { return ej_positive_local_seed(kappa, n0_); }
  double base_state(double kappa) const override {
    return solve_positive_branch_point(kappa, n0_).phi_star;
  }

 private:
  int n0_;
};

class HpModel final : public Model {
 public:
  ModelId id() const override { return ModelId::Hp; }

  double g(double c, double v) const override {
    const double s = ratio(v);
    return c * c * (s - 0.5 * s * s);
  }
  double dg_dv(double c, double v) const override {
    const double w = 1.0 + check(v);
    return c * c / (w * w * w);
  }
  double dg_dc(double c, double v) const override {
    const double s = ratio(v);
    return 2.0 * c * (s - 0.5 * s * s);
  }

  std::vector<double> companion(double c, std::span<const double> values,
                                const CosineGrid&) const override {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = companion_at(c, values[i]);
    return out;
  }
  bool has_pointwise_companion() const override { return true; }
  double companion_at(double c, double v) const override { return c * ratio(v); }
  double companion_dv(double c, double v) const override {
    const double w = 1.0 + check(v);
    return c / (w * w);
  }
  double companion_dc(double, double v) const override { return ratio(v); }

  std::optional<double> termination_bound(double) const override { return std::nullopt; }
  LocalSeed seed(double kappa) const override { return hp_local_seed(kappa); }
  bool primary_is_velocity() const override { return false; }

  BlochEntry bloch_entry(const BlochContext& ctx, int m, int l) const override {
    const double kl = ctx.kappa * (ctx.mu + l);
    const double km = ctx.kappa * (ctx.mu + m);
    const double d = kron(m, l);
    const cplx a = kI * ctx.c * kl * d - kI * km * ctx.u(m - l);
    return {a, -kI * kl * khat(kl) * d, -kI * kl * d - kI * km * ctx.eta(m - l), a};
  }

 private:
  static double check(double v) {
    if (std::abs(1.0 + v) < 1e-12) {
      throw SingularInputError("HP profile equation is singular at value -1");
    }
    return v;
  }
  static double ratio(double v) { return check(v) / (1.0 + v); }
};

class BwModel final : public Model {
 public:
  ModelId id() const override { return ModelId::Bw; }
  double g(double c, double v) const override { return c * c * v - v * v; }
  double dg_dv(double c, double v) const override { return c * c - 2.0 * v; }
  double dg_dc(double c, double v) const override { return 2.0 * c * v; }

  // eta = -c phi', differentiated in the cosine basis.
  std::vector<double> companion(double c, std::span<const double> values,
                                const CosineGrid& grid) const override {
    auto out = derivative_on_grid(forward_cosine(values, grid), grid);
    for (auto& v : out) v *= -c;
    return out;
  }

  // odd, so built from the primary's coefficients
  std::vector<cplx> companion_fourier(double c, std::span<const double> values,
                                      const CosineGrid& grid, int n_coeff) const override {
    auto hat = exp_fourier_coeffs(values, grid, n_coeff);
    for (int n = -n_coeff; n <= n_coeff; ++n) hat[n + n_coeff] *= -c * kI * grid.kappa() * double(n);
    return hat;
  }

  std::optional<double> termination_bound(double c) const override { return 0.5 * c * c; }
  LocalSeed seed(double kappa) const override { return bw_local_seed(kappa); }

  BlochEntry bloch_entry(const BlochContext& ctx, int m, int l) const override {
    const double kl = ctx.kappa * (ctx.mu + l);
    const double km = ctx.kappa * (ctx.mu + m);
    const double d = kron(m, l);
    const cplx drift = kI * ctx.c * kl * d;
    return {drift, cplx{d, 0.0}, -2.0 * km * km * ctx.u(m - l) - kl * kl * khat(kl) * d, drift};
  }
};

void require_positive_kappa(double kappa) {
  if (!(kappa > 0.0)) throw SeedDegenerateError("wavenumber must be positive");
}

}  // namespace

std::vector<cplx> Model::companion_fourier(double c, std::span<const double> values,
                                           const CosineGrid& grid, int n_coeff) const {
  return exp_fourier_coeffs(companion(c, values, grid), grid, n_coeff);
}

double Model::companion_at(double, double) const {
  throw ConfigError("model has no pointwise companion map");
}
double Model::companion_dv(double, double) const {
  throw ConfigError("model has no pointwise companion map");
}
double Model::companion_dc(double, double) const {
  throw ConfigError("model has no pointwise companion map");
}

std::string_view to_string(ModelId id) {
  switch (id) {
    case ModelId::EjZero: return "ej";
    case ModelId::EjPositive: return "ej-positive";
    case ModelId::Hp: return "hp";
    case ModelId::Bw: return "bw";
  }
  return "?";
}

ModelId parse_model_id(std::string_view name) {
  if (name == "ej") return ModelId::EjZero;
  if (name == "ej-positive") return ModelId::EjPositive;
  if (name == "hp") return ModelId::Hp;
  if (name == "bw") return ModelId::Bw;
  throw ConfigError("unknown model '" + std::string(name) +
                    "' (expected one of ej, ej-positive, hp, bw)");
}

ModelPtr make_model(ModelId id, int n0) {
  switch (id) {
    case ModelId::EjZero: return std::make_shared<EjZeroModel>();
    case ModelId::EjPositive:
      if (n0 < 1) throw ConfigError("harmonic index n0 must be >= 1");
      return std::make_shared<EjPositiveModel>(n0);
    case ModelId::Hp: return std::make_shared<HpModel>();
    case ModelId::Bw: return std::make_shared<BwModel>();
  }
  throw ConfigError("unknown model id");
}

double linear_speed(double xi) { return std::sqrt(khat(xi)); }

double ej_amplitude_bound(double c) { return c * (1.0 - 1.0 / std::sqrt(3.0)); }

double ej_gamma_minus(double c) { return 0.5 * (3.0 * c - std::sqrt(8.0 + c * c)); }
double ej_gamma_plus(double c) { return 0.5 * (3.0 * c + std::sqrt(8.0 + c * c)); }

BranchPoint solve_positive_branch_point(double kappa, int n0) {
  require_positive_kappa(kappa);
  if (n0 < 1) throw RootFindError("harmonic index n0 must be >= 1");
  const double kh = khat(kappa * n0);

  auto residual = [kh](double c, double p) -> std::array<double, 2> {
    return {c * c - 1.0 - 1.5 * c * p + 0.5 * p * p, kh - c * c + 3.0 * c * p - 1.5 * p * p};
  };
  // Branching condition restricted to the constant-state curve Gamma_-.
  auto on_curve = [kh](double c) {
    const double p = ej_gamma_minus(c);
    return kh - c * c + 3.0 * c * p - 1.5 * p * p;
  };

  // Bracket a sign change on Gamma_- for the initial guess.
  double c_guess = std::numeric_limits<double>::quiet_NaN();
  double prev_c = 1e-3;
  double prev_f = on_curve(prev_c);
  for (int k = 1; k <= 4000; ++k) {
    const double c = 1e-3 + k * 2.5e-3;
    const double f = on_curve(c);
    if ((f <= 0.0) != (prev_f <= 0.0)) {
      double lo = prev_c, hi = c, flo = prev_f;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = on_curve(mid);
        if ((fm <= 0.0) == (flo <= 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      c_guess = 0.5 * (lo + hi);
      break;
    }
    prev_c = c;
    prev_f = f;
  }
  if (std::isnan(c_guess)) throw RootFindError("no positive-wavespeed branch point bracketed");

  double c = c_guess;
  double p = ej_gamma_minus(c);
  for (int it = 0; it < 50; ++it) {
    const auto r = residual(c, p);
    const double rnorm = std::max(std::abs(r[0]), std::abs(r[1]));
    if (rnorm <= 1e-13) return {c, p};
    const double j11 = 2.0 * c - 1.5 * p, j12 = -1.5 * c + p;
    const double j21 = -2.0 * c + 3.0 * p, j22 = 3.0 * c - 3.0 * p;
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) break;
    const double dc = (r[0] * j22 - j12 * r[1]) / det;
    const double dp = (j11 * r[1] - j21 * r[0]) / det;
    double step = 1.0;
    for (int k = 0; k < 30; ++k) {
      const auto rt = residual(c - step * dc, p - step * dp);
      if (std::max(std::abs(rt[0]), std::abs(rt[1])) < rnorm || step < 1e-6) break;
      step *= 0.5;
    }
    c -= step * dc;
    p -= step * dp;
  }
  const auto r = residual(c, p);
  if (std::max(std::abs(r[0]), std::abs(r[1])) <= 1e-12 && c > 0.0) return {c, p};
  throw RootFindError("Newton iteration for the positive branch point did not converge");
}

LocalSeed ej_local_seed(double kappa) {
  require_positive_kappa(kappa);
  const double ck = linear_speed(kappa);
  const double c2k = linear_speed(2.0 * kappa);
  const double d1 = ck * ck - 1.0;
  const double d2 = ck * ck - c2k * c2k;
  if (std::abs(d1) < kResonanceTol || std::abs(d2) < kResonanceTol) {
    throw SeedDegenerateError("EJ seed is resonant at this wavenumber");
  }
  const double a0 = 0.75 * ck / d1;
  const double a2 = 0.75 * ck / d2;
  const double quad = 0.375 * (-0.5 / ck + 3.0 * ck * (1.0 / d1 + 0.5 / d2));
  LocalSeed s;
  s.c_of_eps = [=](double e) { return ck + quad * e * e; };
  s.dc_deps = [=](double e) { return 2.0 * quad * e; };
  s.profile_of_eps = [=](double x, double e) {
    return e * std::cos(kappa * x) + e * e * (a0 + a2 * std::cos(2.0 * kappa * x));
  };
  s.dprofile_deps = [=](double x, double e) {
    return std::cos(kappa * x) + 2.0 * e * (a0 + a2 * std::cos(2.0 * kappa * x));
  };
  return s;
}

double ej_positive_c2(double kappa, int n0) {
  const auto [cs, ps] = solve_positive_branch_point(kappa, n0);
  const double gv = ej_gv(cs, ps);
  const double gvv = 3.0 * ps - 3.0 * cs;
  const double gc = ej_gc(cs, ps);
  const double gvc = -3.0 * ps + 2.0 * cs;
  const double den_k2 = khat(2.0 * kappa * n0) - gv;
  const double den_0 = 1.0 - gv;
  if (std::abs(den_k2) < kResonanceTol || std::abs(den_0) < kResonanceTol) {
    throw SeedDegenerateError("positive-branch seed is resonant at this wavenumber");
  }
  const double q = gvv / (4.0 * den_k2);
  const double den = gvc + gvv * gc / den_0;
  if (std::abs(den) < kResonanceTol) throw SeedDegenerateError("degenerate positive-branch seed");
  return -(gvv * gvv / (4.0 * den_0) + 0.5 * gvv * q + 0.375) / den;
}

LocalSeed ej_positive_local_seed(double kappa, int n0) {
  require_positive_kappa(kappa);
  const auto [cs, ps] = solve_positive_branch_point(kappa, n0);
  const double gv = ej_gv(cs, ps);
  const double gvv = 3.0 * ps - 3.0 * cs;
  const double gc = ej_gc(cs, ps);
  const double c2 = ej_positive_c2(kappa, n0);
  // q = 3/4 (phi_* - c_*) / (khat(2 kappa n0) - g_v): the cos(2 kappa n0 x)
  // coefficient of the O(a^2) correction.
  const double q = gvv / (4.0 * (khat(2.0 * kappa * n0) - gv));
  const double a0 = (0.25 * gvv + gc * c2) / (1.0 - gv);
  const double k1 = kappa * n0;
  LocalSeed s;
  s.c_of_eps = [=](double a) { return cs + c2 * a * a; };
  s.dc_deps = [=](double a) { return 2.0 * c2 * a; };
  s.profile_of_eps = [=](double x, double a) {
    return ps + a * std::cos(k1 * x) + a * a * (a0 + q * std::cos(2.0 * k1 * x));
  };
  s.dprofile_deps = [=](double x, double a) {
    return std::cos(k1 * x) + 2.0 * a * (a0 + q * std::cos(2.0 * k1 * x));
  };
  return s;
}

LocalSeed bw_local_seed(double kappa) {
  require_positive_kappa(kappa);
  const double ck = linear_speed(kappa);
  const double c2k = linear_speed(2.0 * kappa);
  const double d1 = ck * ck - 1.0;
  const double d2 = ck * ck - c2k * c2k;
  if (std::abs(d1) < kResonanceTol || std::abs(d2) < kResonanceTol) {
    throw SeedDegenerateError("BW seed is resonant at this wavenumber");
  }
  const double a0 = 0.5 / d1;
  const double a2 = 0.5 / d2;
  const double quad = (1.0 / d1 + 0.5 / d2) / (2.0 * ck);
  LocalSeed s;
  s.c_of_eps = [=](double e) { return ck + quad * e * e; };
  s.dc_deps = [=](double e) { return 2.0 * quad * e; };
  s.profile_of_eps = [=](double x, double e) {
    return e * std::cos(kappa * x) + e * e * (a0 + a2 * std::cos(2.0 * kappa * x));
  };
  s.dprofile_deps = [=](double x, double e) {
    return std::cos(kappa * x) + 2.0 * e * (a0 + a2 * std::cos(2.0 * kappa * x));
  };
  return s;
}

LocalSeed hp_local_seed(double kappa) {
  require_positive_kappa(kappa);
  const double ck = linear_speed(kappa);
  LocalSeed s;
  s.c_of_eps = [=](double) { return ck; };
  s.dc_deps = [](double) { return 0.0; };
  s.profile_of_eps = [=](double x, double e) { return e * std::cos(kappa * x); };
  s.dprofile_deps = [=](double x, double) { return std::cos(kappa * x); };
  s.speed_second_order = false;
  return s;
}

}  // namespace whitham
