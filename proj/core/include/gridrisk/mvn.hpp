#pragma once

#include <cstdint>
#include <vector>

namespace gridrisk {

// Standard normal CDF / quantile.
double normal_cdf(double z);
double normal_quantile(double p);
double inverse_erf(double x);

// P(X <= h, Y <= k) for standard bivariate normal with correlation rho.
// Deterministic quadrature with absolute error below ~5e-16 for |rho| < 1;
// handles rho = +-1 exactly.
double bivariate_normal_cdf(double h, double k, double rho);

struct MvnResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;  // ~3-sigma estimate for the QMC path
  bool tolerance_met = true;
  std::uint64_t points_used = 0;
};

// P(X_i <= b_i for all i) for an N(0, R) vector, R a correlation matrix
// (row-major, k*k).  k = 2 dispatches to the deterministic bivariate
// algorithm; k in [3, 5] uses the separation-of-variables transform with a
// shift-randomized Richtmyer rule and an empirical error estimate.  The
// shifts are derived from a fixed internal seed so evaluations are
// deterministic.
MvnResult mvn_cdf(const std::vector<double>& b, const std::vector<double>& corr,
                  double abs_tol);

}  // namespace gridrisk
