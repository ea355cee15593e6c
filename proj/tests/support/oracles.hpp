#pragma once

// Reference computations for the test suite. Nothing here includes the
// library headers: every oracle is written from the defining formulas.

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

struct OracleReport {
  std::string name;
  double max_abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::map<std::string, std::string> metadata;
};

OracleReport report(std::string name, double max_abs_error, double tolerance,
                    std::map<std::string, std::string> metadata = {});

/// tanh(xi)/xi in long double, 1 at xi = 0.
double symbol(double xi);

/// Eigenvalues of the Bloch operator about a constant state. `u0`, `eta0` are
/// the constant velocity and height (zero for the trivial branch); every model
/// reduces to 2x2 diagonal blocks. Model names: "ej", "hp", "bw".
std::vector<cplx> constant_state_spectrum(const std::string& model, double kappa, double c,
                                          double mu, int n_modes, double u0 = 0.0,
                                          double eta0 = 0.0);

/// Centered-difference Jacobian, column by column.
Eigen::MatrixXd finite_difference_jacobian(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& y,
    double step);

/// Midpoint-rule cosine coefficients by direct summation with std::cos.
std::vector<double> cosine_coefficients(const std::vector<double>& values, double kappa);
/// Series evaluation at the midpoint nodes by direct summation.
std::vector<double> cosine_series_on_nodes(const std::vector<double>& coeffs, double kappa);
/// Midpoint nodes (2i-1) pi / (2 kappa N).
std::vector<double> midpoint_nodes(double kappa, int n);

/// out(m) = sum_l f(m - l) v(l), with f indexed -nf..nf and v, out indexed -nv..nv.
std::vector<cplx> truncated_convolution(const std::vector<cplx>& f, const std::vector<cplx>& v);

/// Symmetric Hausdorff distance between two finite point sets in C, each
/// restricted to |z| <= radius first.
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b, double radius);

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Max over a of min over b of |a - b|, pairing sorted multisets greedily.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

}  // namespace oracle
