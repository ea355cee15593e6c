#include "whitham/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>

#include <fftw3.h>

#include "whitham/error.hpp"

namespace whitham {

namespace {

constexpr cplx kI{0.0, 1.0};

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool finite(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// Real fields <-> one-sided coefficients f_n = (1/M) sum_j f_j e^{-2 pi i n j / M},
// n = 0..M/2, with fixed FFTW plans.
class Spectral {
 public:
  Spectral(double kappa, int m) : kappa_(kappa), m_(m), half_(m / 2 + 1) {
    if (m < 2 || m % 2 != 0) throw InputShapeError("grid size M must be even and at least 2");
    real_ = fftw_alloc_real(m_);
    spec_ = fftw_alloc_complex(half_);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fwd_ = fftw_plan_dft_r2c_1d(m_, real_, spec_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(m_, spec_, real_, FFTW_ESTIMATE);
  }
  ~Spectral() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  int size() const { return m_; }
  int half() const { return half_; }
  double kappa() const { return kappa_; }
  double wavenumber(int n) const { return kappa_ * n; }

  void forward(const double* in, std::vector<cplx>& out) {
    std::copy(in, in + m_, real_);
    fftw_execute(fwd_);
    out.resize(half_);
    const double scale = 1.0 / m_;
    for (int n = 0; n < half_; ++n) out[n] = cplx(spec_[n][0], spec_[n][1]) * scale;
  }
  void inverse(const std::vector<cplx>& in, double* out) {
    for (int n = 0; n < half_; ++n) {
      spec_[n][0] = in[n].real();
      spec_[n][1] = in[n].imag();
    }
    // c2r reads only the real part of the zero and Nyquist coefficients
    fftw_execute(inv_);
    std::copy(real_, real_ + m_, out);
  }
  /// i kappa n f_n, zero at the Nyquist index.
  void differentiate(std::vector<cplx>& f) const {
    for (int n = 0; n < half_; ++n) f[n] *= kI * wavenumber(n);
    f[half_ - 1] = 0.0;
  }

 private:
  double kappa_;
  int m_;
  int half_;
  double* real_;
  fftw_complex* spec_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

struct Rotation {
  double tau;
  std::vector<double> cos_t, sin_t, root;  // root = sqrt(khat)
};

class Stepper {
 public:
  Stepper(double kappa, int m) : fft_(kappa, m) {
    const int h = fft_.half();
    root_.resize(h);
    for (int n = 0; n < h; ++n) root_[n] = std::sqrt(khat(fft_.wavenumber(n)));
    work_u_.resize(m);
    work_ux_.resize(m);
    work_eta_.resize(m);
  }

  Spectral& fft() { return fft_; }

  void load(const EvolutionState& s, std::vector<cplx>& u, std::vector<cplx>& eta) {
    if (static_cast<int>(s.u.size()) != fft_.size() || static_cast<int>(s.eta.size()) != fft_.size()) {
      throw InputShapeError("u and eta must both have M values");
    }
    fft_.forward(s.u.data(), u);
    fft_.forward(s.eta.data(), eta);
  }
  void store(const std::vector<cplx>& u, const std::vector<cplx>& eta, EvolutionState& s) {
    s.u.resize(fft_.size());
    s.eta.resize(fft_.size());
    fft_.inverse(u, s.u.data());
    fft_.inverse(eta, s.eta.data());
  }

  void linear(std::vector<cplx>& u, std::vector<cplx>& eta, double tau) {
    const Rotation& r = rotation(tau);
    for (int n = 1; n + 1 < fft_.half(); ++n) {
      const cplx a = u[n], b = eta[n];
      u[n] = r.cos_t[n] * a - kI * (r.sin_t[n] / r.root[n]) * b;
      eta[n] = r.cos_t[n] * b - kI * (r.sin_t[n] * r.root[n]) * a;
    }
  }

  void rhs(const std::vector<cplx>& u, const std::vector<cplx>& eta, std::vector<cplx>& du,
           std::vector<cplx>& deta) {
    const int m = fft_.size();
    fft_.inverse(u, work_u_.data());
    tmp_ = u;
    fft_.differentiate(tmp_);
    fft_.inverse(tmp_, work_ux_.data());
    fft_.inverse(eta, work_eta_.data());
    for (int j = 0; j < m; ++j) {
      work_ux_[j] *= -work_u_[j];
      work_eta_[j] *= work_u_[j];
    }
    fft_.forward(work_ux_.data(), du);
    fft_.forward(work_eta_.data(), deta);
    fft_.differentiate(deta);
    for (auto& z : deta) z = -z;
  }

  void rk4(std::vector<cplx>& u, std::vector<cplx>& eta, double dt, double t) {
    const std::size_t h = u.size();
    rhs(u, eta, k1u_, k1e_);
    axpy(u, eta, 0.5 * dt, k1u_, k1e_);
    rhs(su_, se_, k2u_, k2e_);
    axpy(u, eta, 0.5 * dt, k2u_, k2e_);
    rhs(su_, se_, k3u_, k3e_);
    axpy(u, eta, dt, k3u_, k3e_);
    rhs(su_, se_, k4u_, k4e_);
    const double w = dt / 6.0;
    for (std::size_t n = 0; n < h; ++n) {
      u[n] += w * (k1u_[n] + 2.0 * k2u_[n] + 2.0 * k3u_[n] + k4u_[n]);
      eta[n] += w * (k1e_[n] + 2.0 * k2e_[n] + 2.0 * k3e_[n] + k4e_[n]);
    }
    if (!finite(u) || !finite(eta)) {
      std::ostringstream msg;
      msg << "non-finite field in the nonlinear step at t = " << t;
      throw BlowUpError(msg.str(), t);
    }
  }

  void step(std::vector<cplx>& u, std::vector<cplx>& eta, const SplittingScheme& scheme, double dt,
            double t) {
    const auto& w = scheme.weights;
    double pending = 0.5 * w.front() * dt;
    double elapsed = 0.0;
    for (std::size_t s = 0; s < w.size(); ++s) {
      linear(u, eta, pending);
      const int sub = scheme.nonlinear_substeps;
      for (int k = 0; k < sub; ++k) rk4(u, eta, w[s] * dt / sub, t + elapsed + k * w[s] * dt / sub);
      elapsed += w[s] * dt;
      pending = 0.5 * w[s] * dt + (s + 1 < w.size() ? 0.5 * w[s + 1] * dt : 0.0);
    }
    linear(u, eta, pending);
  }

 private:
  const Rotation& rotation(double tau) {
    for (const auto& r : cache_)
      if (r.tau == tau) return r;
    Rotation r;
    r.tau = tau;
    r.root = root_;
    r.cos_t.resize(fft_.half());
    r.sin_t.resize(fft_.half());
    for (int n = 0; n < fft_.half(); ++n) {
      const double omega = fft_.wavenumber(n) * root_[n];
      r.cos_t[n] = std::cos(omega * tau);
      r.sin_t[n] = std::sin(omega * tau);
    }
    if (cache_.size() > 32) cache_.clear();
    cache_.push_back(std::move(r));
    return cache_.back();
  }

  void axpy(const std::vector<cplx>& u, const std::vector<cplx>& eta, double a,
            const std::vector<cplx>& du, const std::vector<cplx>& deta) {
    su_.resize(u.size());
    se_.resize(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
      su_[n] = u[n] + a * du[n];
      se_[n] = eta[n] + a * deta[n];
    }
  }

  Spectral fft_;
  std::vector<double> root_;
  std::vector<Rotation> cache_;
  std::vector<double> work_u_, work_ux_, work_eta_;
  std::vector<cplx> tmp_, su_, se_;
  std::vector<cplx> k1u_, k1e_, k2u_, k2e_, k3u_, k3e_, k4u_, k4e_;
};

// One-sided energy weights: 1 at n = 0 and the Nyquist index, 2 elsewhere.
double weight(int n, int half) { return (n == 0 || n == half - 1) ? 1.0 : 2.0; }

double tail_share(const std::vector<std::vector<cplx>>& fields, double fraction) {
  double total = 0.0, tail = 0.0;
  for (const auto& f : fields) {
    const int half = static_cast<int>(f.size());
    const double cut = (1.0 - fraction) * (half - 1);
    for (int n = 0; n < half; ++n) {
      const double e = weight(n, half) * std::norm(f[n]);
      total += e;
      if (n > cut) tail += e;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

double EvolutionState::dx() const { return 2.0 * std::numbers::pi / (kappa * size()); }

SplittingScheme SplittingScheme::yoshida6(double dt) {
  const double w1 = -1.17767998417887;
  const double w2 = 0.235573213359357;
  const double w3 = 0.784513610477560;
  const double w0 = 1.0 - 2.0 * (w1 + w2 + w3);
  return {{w3, w2, w1, w0, w1, w2, w3}, dt};
}

SplittingScheme SplittingScheme::strang(double dt) { return {{1.0}, dt}; }

EvolutionState state_from_point(const ModelPtr& model, double kappa, const ContinuationPoint& point) {
  if (model->id() != ModelId::EjZero && model->id() != ModelId::EjPositive) {
    throw ConfigError("only the EJ system is evolved");
  }
  const int n = static_cast<int>(point.values.size());
  CosineGrid grid(kappa, n);
  const auto series = forward_cosine(point.values, grid, TransformPath::Fast);
  EvolutionState s;
  s.kappa = kappa;
  s.u.resize(2 * n);
  Spectral fft(kappa, 2 * n);
  std::vector<cplx> hat(n + 1, 0.0);
  hat[0] = series.coeffs[0];
  for (int k = 1; k < n; ++k) hat[k] = 0.5 * series.coeffs[k];
  fft.inverse(hat, s.u.data());
  s.eta.resize(2 * n);
  for (int j = 0; j < 2 * n; ++j) s.eta[j] = model->companion_at(point.c, s.u[j]);
  return s;
}

EvolutionState linear_step(const EvolutionState& state, double dt) {
  Stepper st(state.kappa, state.size());
  std::vector<cplx> u, eta;
  st.load(state, u, eta);
  st.linear(u, eta, dt);
  EvolutionState out = state;
  st.store(u, eta, out);
  out.t += dt;
  return out;
}

EvolutionState nonlinear_step_rk4(const EvolutionState& state, double dt) {
  Stepper st(state.kappa, state.size());
  std::vector<cplx> u, eta;
  st.load(state, u, eta);
  st.rk4(u, eta, dt, state.t);
  EvolutionState out = state;
  st.store(u, eta, out);
  out.t += dt;
  return out;
}

EvolutionState split_step(const EvolutionState& state, const SplittingScheme& scheme) {
  Stepper st(state.kappa, state.size());
  std::vector<cplx> u, eta;
  st.load(state, u, eta);
  st.step(u, eta, scheme, scheme.dt, state.t);
  EvolutionState out = state;
  st.store(u, eta, out);
  out.t += scheme.dt;
  return out;
}

double tail_energy(std::span<const double> field, double fraction) {
  const int m = static_cast<int>(field.size());
  if (m < 2 || m % 2 != 0) throw InputShapeError("field length must be even and at least 2");
  Spectral fft(1.0, m);
  std::vector<cplx> hat;
  fft.forward(field.data(), hat);
  return tail_share({hat}, fraction);
}

double tail_energy(const EvolutionState& state, double fraction) {
  Stepper st(state.kappa, state.size());
  std::vector<cplx> u, eta;
  st.load(state, u, eta);
  return tail_share({u, eta}, fraction);
}

std::vector<double> translate(std::span<const double> field, double kappa, double shift) {
  const int m = static_cast<int>(field.size());
  Spectral fft(kappa, m);
  std::vector<cplx> hat;
  fft.forward(field.data(), hat);
  for (int n = 0; n < fft.half(); ++n) hat[n] *= std::exp(-kI * (kappa * n * shift));
  hat.back() = hat.back().real();
  std::vector<double> out(m);
  fft.inverse(hat, out.data());
  return out;
}

EvolutionResult evolve(const EvolutionState& initial, double t_final, const SplittingScheme& scheme,
                       const EvolutionOptions& options) {
  if (!(scheme.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("t_final must be non-negative");
  if (scheme.weights.empty()) throw ConfigError("splitting scheme has no stages");
  if (scheme.nonlinear_substeps < 1) throw ConfigError("nonlinear substeps must be at least 1");
  if (options.snapshot_every < 1) throw ConfigError("snapshot stride must be at least 1");
  if (!(options.tail_fraction > 0.0 && options.tail_fraction < 1.0)) {
    throw ConfigError("tail fraction must lie in (0, 1)");
  }

  Stepper st(initial.kappa, initial.size());
  std::vector<cplx> u, eta, eta0;
  st.load(initial, u, eta);
  eta0 = eta;
  const double period = 2.0 * std::numbers::pi / initial.kappa;
  const int half = static_cast<int>(eta.size());

  EvolutionResult res;
  res.final_state = initial;
  auto& state = res.final_state;

  auto snapshot = [&] {
    Snapshot s;
    s.t = state.t;
    s.max_norm = std::max(max_abs(state.u), max_abs(state.eta));
    s.tail_energy = tail_share({u, eta}, options.tail_fraction);
    if (options.wave_speed) {
      const double shift = *options.wave_speed * state.t;
      double sum = 0.0;
      for (int n = 0; n < half; ++n) {
        cplx ref = eta0[n] * std::exp(-kI * (initial.kappa * n * shift));
        if (n == half - 1) ref = ref.real();
        sum += weight(n, half) * std::norm(eta[n] - ref);
      }
      s.l2_residual = std::sqrt(period * sum);
    } else {
      s.l2_residual = std::numeric_limits<double>::quiet_NaN();
    }
    res.snapshots.push_back(s);
  };

  snapshot();
  const long n_steps =
      t_final == 0.0 ? 0 : static_cast<long>(std::ceil(t_final / scheme.dt - 1e-9));
  for (long k = 1; k <= n_steps; ++k) {
    const double dt = k < n_steps ? scheme.dt : t_final - (n_steps - 1) * scheme.dt;
    try {
      st.step(u, eta, scheme, dt, state.t);
    } catch (const BlowUpError& e) {
      res.blew_up = true;
      res.blowup_time = e.t;
      res.blowup_detail = e.what();
      res.steps = k - 1;
      return res;
    }
    state.t = k < n_steps ? k * scheme.dt : t_final;
    st.store(u, eta, state);
    res.steps = k;
    const double norm = std::max(max_abs(state.u), max_abs(state.eta));
    if (!(norm <= options.blowup_threshold)) {
      snapshot();
      res.blew_up = true;
      res.blowup_time = state.t;
      std::ostringstream msg;
      msg << "max-norm " << norm << " exceeded " << options.blowup_threshold << " at t = " << state.t;
      res.blowup_detail = msg.str();
      return res;
    }
    if (k % options.snapshot_every == 0 || k == n_steps) snapshot();
  }
  return res;
}

}  // namespace whitham
