#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "gridrisk/grid_case.hpp"

namespace gridrisk {

// Inverse-stress marginal: Gaussian with mu fixed at 1 and sigma chosen so
// that the mass below 0 equals the branch outage probability p.
struct Marginal {
  double p = 0.0;
  double mu = 1.0;
  double sigma = 0.0;
};

// sigma = -1 / (erf^-1(2p - 1) * sqrt(2)); requires 0 < p < 0.5.
Marginal calibrate_marginal(double p);

// Exponential-decay spatial correlation: rho(d) = rho0 * exp(-d/L).
// length_km = 0 is treated as the pointwise limit (rho0 at d = 0, else 0),
// which is the uncorrelated column of the experiment grids.
struct CorrelationModel {
  double rho0 = 0.0;
  double length_km = 0.0;
  std::function<double(int, int)> branch_distance_km;  // by branch id
};

double correlation(const CorrelationModel& model, double d_km);

// Model with the planar straight-segment distance of the given case.
CorrelationModel spatial_correlation_model(const GridCase& gcase, double rho0, double length_km);

struct CovarianceMatrix {
  int k = 0;
  std::vector<double> m;  // row-major k*k
  bool repaired = false;  // eigenvalue clipping was applied

  double at(int i, int j) const { return m[static_cast<std::size_t>(i * k + j)]; }
  double& at(int i, int j) { return m[static_cast<std::size_t>(i * k + j)]; }
};

// cov(i,j) = rho_ij sigma_i sigma_j with rho from the model over pairwise
// branch distances.  PSD is verified (smallest eigenvalue >= -1e-10 * trace);
// mild indefiniteness is repaired by eigenvalue clipping and flagged, and the
// repair must not move any implied correlation by more than 1e-6.
CovarianceMatrix build_covariance(const std::vector<Marginal>& marginals,
                                  const CorrelationModel& model,
                                  const std::vector<int>& branch_ids);

// Same, from an explicit correlation matrix (row-major k*k).
CovarianceMatrix build_covariance_from_corr(const std::vector<Marginal>& marginals,
                                            const std::vector<double>& corr);

struct JointOutageProbability {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  bool tolerance_met = true;
};

// Orthant probability P(X <= 0) for X ~ N(1, C): the joint probability that
// every branch in the set fails.  Deterministic bivariate evaluation for
// k = 2 (target abs error 1e-10), transformed quasi-random integration for
// k >= 3 (target 1e-8).  Frechet-Hoeffding bounds are asserted on every
// evaluation.
JointOutageProbability joint_outage_probability(const std::vector<Marginal>& marginals,
                                                const CovarianceMatrix& cov);

// p_omega for a branch set: marginals from per-branch outage probabilities,
// covariance from pairwise distances, then the joint orthant probability.
JointOutageProbability contingency_probability_detail(const GridCase& gcase,
                                                      const std::vector<int>& branch_set,
                                                      const CorrelationModel& model);
double contingency_probability(const GridCase& gcase, const std::vector<int>& branch_set,
                               const CorrelationModel& model);

// Memo cache keyed by (sorted branch set, rho0, L); campaigns re-evaluate the
// same sets across a correlation grid.
class ProbabilityCache {
 public:
  JointOutageProbability get_or_compute(const GridCase& gcase, const std::vector<int>& branch_set,
                                        const CorrelationModel& model);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::pair<std::vector<int>, std::pair<double, double>>, JointOutageProbability> map_;
};

}  // namespace gridrisk
