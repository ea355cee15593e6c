#include "whitham/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include <lapacke.h>

#include "whitham/error.hpp"

namespace whitham {

BlochProfile prepare_profile(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                             int n_modes) {
  const int n_points = static_cast<int>(point.values.size());
  if (n_modes < 1) throw ResolutionError("n_modes must be at least 1");
  if (n_modes >= n_points) {
    throw ResolutionError("n_modes = " + std::to_string(n_modes) +
                          " exceeds the coefficient resolution of a " + std::to_string(n_points) +
                          "-point profile");
  }
  CosineGrid grid(kappa, n_points);
  BlochProfile p;
  p.model = model;
  p.kappa = kappa;
  p.c = point.c;
  p.n_points = n_points;
  p.n_coeff = std::min(2 * n_modes, n_points - 1);
  auto primary_hat = exp_fourier_coeffs(point.values, grid, p.n_coeff);
  auto companion_hat = model->companion_fourier(point.c, point.values, grid, p.n_coeff);
  if (model->primary_is_velocity()) {
    p.u_hat = std::move(primary_hat);
    p.eta_hat = std::move(companion_hat);
  } else {
    p.u_hat = std::move(companion_hat);
    p.eta_hat = std::move(primary_hat);
  }
  return p;
}

std::vector<cplx> bloch_coeff_product(std::span<const cplx> fhat, std::span<const cplx> vt) {
  const int nf = static_cast<int>(fhat.size() / 2);
  const int nv = static_cast<int>(vt.size() / 2);
  std::vector<cplx> out(vt.size());
  for (int m = -nv; m <= nv; ++m) {
    cplx s{};
    const int lo = std::max(-nv, m - nf);
    const int hi = std::min(nv, m + nf);
    for (int l = lo; l <= hi; ++l) s += fhat[m - l + nf] * vt[l + nv];
    out[m + nv] = s;
  }
  return out;
}

BlochMatrix assemble_bloch_matrix(const BlochProfile& profile, double mu, int n_modes) {
  if (n_modes >= profile.n_points) {
    throw ResolutionError("n_modes must be below the profile's point count");
  }
  const int dim = 2 * n_modes + 1;
  BlochContext ctx{profile.kappa, profile.c, mu, profile.n_coeff, profile.u_hat, profile.eta_hat};
  BlochMatrix out;
  out.mu = mu;
  out.n_modes = n_modes;
  out.entries.resize(2 * dim, 2 * dim);
  for (int m = -n_modes; m <= n_modes; ++m) {
    for (int l = -n_modes; l <= n_modes; ++l) {
      const auto e = profile.model->bloch_entry(ctx, m, l);
      const int r = m + n_modes, c = l + n_modes;
      out.entries(r, c) = e.a;
      out.entries(r, c + dim) = e.b;
      out.entries(r + dim, c) = e.c;
      out.entries(r + dim, c + dim) = e.d;
    }
  }
  if (!out.entries.allFinite()) {
    throw EigenError("non-finite Bloch matrix entry", mu);
  }
  return out;
}

BlochMatrix assemble_bloch_matrix(const ModelPtr& model, double kappa, const ContinuationPoint& point,
                                  double mu, int n_modes) {
  return assemble_bloch_matrix(prepare_profile(model, kappa, point, n_modes), mu, n_modes);
}

Eigen::VectorXcd translation_mode(const BlochProfile& profile, int n_modes) {
  const int dim = 2 * n_modes + 1;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * dim);
  const cplx i{0.0, 1.0};
  for (int n = -std::min(n_modes, profile.n_coeff); n <= std::min(n_modes, profile.n_coeff); ++n) {
    v[n + n_modes] = i * profile.kappa * double(n) * profile.u_hat[n + profile.n_coeff];
    v[n + n_modes + dim] = i * profile.kappa * double(n) * profile.eta_hat[n + profile.n_coeff];
  }
  return v;
}

SpectrumSlice eigenvalues(const BlochMatrix& matrix) {
  const auto n = static_cast<lapack_int>(matrix.entries.rows());
  Eigen::MatrixXcd work = matrix.entries;
  SpectrumSlice s;
  s.mu = matrix.mu;
  s.eigenvalues.resize(n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(s.eigenvalues.data()), nullptr, 1, nullptr, 1);
  if (info != 0) {
    throw EigenError("zgeev failed with info " + std::to_string(info), matrix.mu);
  }
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  s.max_growth = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back().real();
  return s;
}

SpectrumSweep sweep(const BlochProfile& profile, int n_modes, const SweepOptions& options) {
  const double count_real = 1.0 / options.dmu;
  const long count = std::lround(count_real);
  if (!(options.dmu > 0.0) || count < 1 || std::abs(count_real - count) > 1e-9 * count_real) {
    throw ConfigError("dmu must divide 1 into an integer number of subintervals");
  }
  if (n_modes >= profile.n_points) {
    throw ResolutionError("n_modes must be below the profile's point count");
  }
  const double mu_max = std::min(options.mu_max, 1.0);
  long used = count;
  while (used > 1 && static_cast<double>(used - 1) / static_cast<double>(count) > mu_max + 1e-12) --used;
  SpectrumSweep out;
  out.n_modes = n_modes;
  out.dmu = options.dmu;
  out.thresholds = options.thresholds;
  out.slices.resize(used);
  out.full_mesh = used == count;

  std::atomic<long> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  double error_mu = std::numeric_limits<double>::infinity();
  auto work = [&] {
    for (long j = next++; j < used; j = next++) {
      const double mu = static_cast<double>(j) / static_cast<double>(count);
      try {
        out.slices[j] = eigenvalues(assemble_bloch_matrix(profile, mu, n_modes));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (mu < error_mu) {
          error_mu = mu;
          error = std::current_exception();
        }
      }
    }
  };
  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  out.flags = classify(out, out.thresholds);
  return out;
}

SpectrumSweep sweep(const ModelPtr& model, double kappa, const ContinuationPoint& point, int n_modes,
                    const SweepOptions& options) {
  return sweep(prepare_profile(model, kappa, point, n_modes), n_modes, options);
}

std::vector<std::pair<double, double>> growth_rate_curve(const SpectrumSweep& sweep) {
  std::vector<std::pair<double, double>> out;
  out.reserve(sweep.slices.size());
  for (const auto& s : sweep.slices) out.emplace_back(s.mu, s.max_growth);
  return out;
}

InstabilityFlags classify(const SpectrumSweep& sweep, const StabilityThresholds& t) {
  InstabilityFlags f;
  for (const auto& s : sweep.slices) {
    for (const auto& lambda : s.eigenvalues) {
      if (lambda.real() <= t.tol_grow) continue;
      if (s.mu > 0.0 && s.mu <= t.mu_mod && std::abs(lambda) < t.r_origin) f.modulational = true;
      if (std::abs(lambda.imag()) > t.r_origin) f.high_frequency = true;
      if (s.mu == 0.0 && std::abs(lambda) >= t.kernel_radius) f.coperiodic = true;
    }
  }
  return f;
}

}  // namespace whitham
