#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

using oracle::cplx;

namespace {

int count_near_zero(const std::vector<cplx>& v, double tol) {
  int n = 0;
  for (const auto& z : v) n += std::abs(z) <= tol;
  return n;
}

}  // namespace

TEST_CASE("report pass flag") {
  CHECK(oracle::report("a", 1e-9, 1e-8).pass);
  CHECK(oracle::report("b", 1e-8, 1e-8).pass);
  CHECK_FALSE(oracle::report("c", 2e-8, 1e-8).pass);
  CHECK_FALSE(oracle::report("d", std::nan(""), 1.0).pass);
  CHECK(oracle::report("e", 0.0, 0.0, {{"n", "4"}}).metadata.at("n") == "4");
}

TEST_CASE("finite-difference Jacobian") {
  Eigen::MatrixXd a(3, 2);
  a << 1.0, -2.0, 0.5, 3.0, 4.0, 0.25;
  const Eigen::VectorXd b = Eigen::Vector3d(1.0, 2.0, 3.0);
  auto lin = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return a * y + b; };
  const auto j = oracle::finite_difference_jacobian(lin, Eigen::Vector2d(0.3, -1.2), 1e-4);
  CHECK((j - a).cwiseAbs().maxCoeff() <= 1e-10);

  auto sq = [](const Eigen::VectorXd& y) -> Eigen::VectorXd { return y.cwiseProduct(y); };
  const auto q = oracle::finite_difference_jacobian(sq, Eigen::VectorXd::Constant(1, 3.0), 1e-6);
  CHECK(std::abs(q(0, 0) - 6.0) <= 1e-8);
}

TEST_CASE("constant-state spectra") {
  const double c = 0.8727;
  const auto at0 = oracle::constant_state_spectrum("ej", 1.0, c, 0.0, 2);
  CHECK(at0.size() == 10);
  CHECK(count_near_zero(at0, 1e-15) == 2);

  const auto half = oracle::constant_state_spectrum("ej", 1.0, c, 0.5, 2);
  REQUIRE(half.size() == 10);
  for (const auto& z : half) CHECK(z.real() == 0.0);

  // at the bifurcation speed the l = +-1 branches touch zero
  for (const std::string model : {"ej", "hp", "bw"}) {
    for (double kappa : {0.7, 1.0, 1.611}) {
      const double ck = std::sqrt(std::tanh(kappa) / kappa);
      CHECK(count_near_zero(oracle::constant_state_spectrum(model, kappa, ck, 0.0, 3), 1e-12) == 4);
    }
  }
}

TEST_CASE("symbol") {
  CHECK(oracle::symbol(0.0) == 1.0);
  CHECK(oracle::symbol(1e-9) == doctest::Approx(1.0));
  CHECK(oracle::symbol(2.0) == doctest::Approx(std::tanh(2.0) / 2.0).epsilon(1e-15));
  CHECK(oracle::symbol(-2.0) == oracle::symbol(2.0));
}

TEST_CASE("cosine transforms by direct summation") {
  const int n = 12;
  const double kappa = 1.3;
  const auto x = oracle::midpoint_nodes(kappa, n);
  REQUIRE(x.size() == n);
  CHECK(x[0] == doctest::Approx(std::numbers::pi / (2.0 * kappa * n)));
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 0.5 + 2.0 * std::cos(3.0 * kappa * x[i]);
  const auto coeffs = oracle::cosine_coefficients(v, kappa);
  for (int k = 0; k < n; ++k) {
    const double want = k == 0 ? 0.5 : k == 3 ? 2.0 : 0.0;
    CHECK(std::abs(coeffs[k] - want) <= 1e-13);
  }
  const auto back = oracle::cosine_series_on_nodes(coeffs, kappa);
  for (int i = 0; i < n; ++i) CHECK(std::abs(back[i] - v[i]) <= 1e-13);
}

TEST_CASE("convolution, distances, slopes") {
  // a delta at index 0 is the identity
  std::vector<cplx> delta(5, 0.0);
  delta[2] = 1.0;
  const std::vector<cplx> v{{1, 2}, {3, -1}, {0, 0.5}};
  CHECK(oracle::truncated_convolution(delta, v) == v);
  // a shift by one drops the end of the window
  std::vector<cplx> shift(5, 0.0);
  shift[3] = 1.0;
  const auto s = oracle::truncated_convolution(shift, v);
  CHECK(s[0] == cplx{});
  CHECK(s[1] == v[0]);
  CHECK(s[2] == v[1]);

  const std::vector<cplx> a{{0, 1}, {0, -1}, {5, 0}};
  const std::vector<cplx> b{{0, 1.1}, {0, -1}};
  CHECK(oracle::hausdorff(a, b, 2.0) == doctest::Approx(0.1));
  CHECK(oracle::hausdorff(a, a, 10.0) == 0.0);
  CHECK(oracle::multiset_distance(a, a) == 0.0);

  CHECK(oracle::fitted_slope({1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}) == doctest::Approx(2.0));
  CHECK(oracle::fitted_slope({0.0, 1.0, 2.0, 3.0}, {1.0, -2.0, -5.0, -8.0}) == doctest::Approx(-3.0));
}
