#include "gridrisk/copula.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gridrisk/geometry.hpp"
#include "gridrisk/mvn.hpp"

namespace gridrisk {

Marginal calibrate_marginal(double p) {
  if (!(p > 0.0 && p < 0.5)) {
    throw DomainError("marginal calibration requires 0 < p < 0.5 (got " + std::to_string(p) + ")");
  }
  Marginal m;
  m.p = p;
  m.mu = 1.0;
  m.sigma = -1.0 / (inverse_erf(2.0 * p - 1.0) * std::sqrt(2.0));
  return m;
}

double correlation(const CorrelationModel& model, double d_km) {
  if (d_km < 0.0) throw DomainError("distance must be non-negative");
  if (model.rho0 == 0.0) return 0.0;
  if (d_km == 0.0) return model.rho0;
  if (model.length_km == 0.0) return 0.0;
  return model.rho0 * std::exp(-d_km / model.length_km);
}

CorrelationModel spatial_correlation_model(const GridCase& gcase, double rho0, double length_km) {
  if (!(rho0 >= 0.0 && rho0 < 1.0)) throw DomainError("rho0 must lie in [0, 1)");
  if (length_km < 0.0) throw DomainError("characteristic length must be non-negative");
  CorrelationModel model;
  model.rho0 = rho0;
  model.length_km = length_km;
  // Capture by value: the model must outlive no one; GridCase is immutable
  // and owned by the caller.
  model.branch_distance_km = [&gcase](int a, int b) {
    return branch_distance(branch_segment(gcase, a), branch_segment(gcase, b));
  };
  return model;
}

namespace {

CovarianceMatrix assemble_and_check(const std::vector<Marginal>& marginals,
                                    const std::vector<double>& corr) {
  const int k = static_cast<int>(marginals.size());
  if (k < 2 || k > 5) throw DomainError("covariance assembly supports 2 <= k <= 5");

  CovarianceMatrix cov;
  cov.k = k;
  cov.m.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double rho = i == j ? 1.0 : corr[static_cast<std::size_t>(i * k + j)];
      if (i != j && !(rho >= -1.0 && rho <= 1.0))
        throw DomainError("correlation entry outside [-1, 1]");
      cov.at(i, j) = rho * marginals[static_cast<std::size_t>(i)].sigma *
                     marginals[static_cast<std::size_t>(j)].sigma;
    }
  }

  Eigen::MatrixXd C(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) C(i, j) = cov.at(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(C);
  const double trace = C.trace();
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig >= -1e-10 * trace) {
    return cov;
  }

  // Mildly indefinite (possible: the distance is only a semi-metric).
  // Clip negative eigenvalues, rebuild, and restore the exact diagonal.
  Eigen::VectorXd clipped = eig.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd repaired =
      eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  for (int i = 0; i < k; ++i) {
    const double scale = std::sqrt(C(i, i) / std::max(repaired(i, i), 1e-300));
    for (int j = 0; j < k; ++j) {
      repaired(i, j) *= scale;
      repaired(j, i) *= scale;
    }
    repaired(i, i) = C(i, i);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double rho_old = C(i, j) / std::sqrt(C(i, i) * C(j, j));
      const double rho_new = repaired(i, j) / std::sqrt(repaired(i, i) * repaired(j, j));
      if (std::abs(rho_new - rho_old) > 1e-6) {
        throw NotRepairable("covariance repair would move a correlation by more than 1e-6");
      }
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) cov.at(i, j) = repaired(i, j);
  cov.repaired = true;
  return cov;
}

}  // namespace

CovarianceMatrix build_covariance(const std::vector<Marginal>& marginals,
                                  const CorrelationModel& model,
                                  const std::vector<int>& branch_ids) {
  const int k = static_cast<int>(marginals.size());
  if (static_cast<int>(branch_ids.size()) != k)
    throw DomainError("marginal/branch count mismatch");
  if (!model.branch_distance_km) throw DomainError("correlation model has no distance function");
  std::vector<double> corr(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 1.0);
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double d = model.branch_distance_km(branch_ids[static_cast<std::size_t>(i)],
                                                branch_ids[static_cast<std::size_t>(j)]);
      const double rho = correlation(model, d);
      corr[static_cast<std::size_t>(i * k + j)] = rho;
      corr[static_cast<std::size_t>(j * k + i)] = rho;
    }
  }
  return assemble_and_check(marginals, corr);
}

CovarianceMatrix build_covariance_from_corr(const std::vector<Marginal>& marginals,
                                            const std::vector<double>& corr) {
  return assemble_and_check(marginals, corr);
}

JointOutageProbability joint_outage_probability(const std::vector<Marginal>& marginals,
                                                const CovarianceMatrix& cov) {
  const int k = cov.k;
  if (static_cast<int>(marginals.size()) != k) throw DomainError("marginal/cov size mismatch");
  if (k < 2 || k > 5) throw DomainError("joint outage probability supports 2 <= k <= 5");

  // Standardize: P(X <= 0) = P(Z <= b), b_i = -mu_i / sigma_i.
  std::vector<double> b(static_cast<std::size_t>(k));
  std::vector<double> corr(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 1.0);
  for (int i = 0; i < k; ++i) {
    const double si = std::sqrt(cov.at(i, i));
    b[static_cast<std::size_t>(i)] = -marginals[static_cast<std::size_t>(i)].mu / si;
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      corr[static_cast<std::size_t>(i * k + j)] =
          cov.at(i, j) / (si * std::sqrt(cov.at(j, j)));
    }
  }

  const double tol = k == 2 ? 1e-10 : 1e-8;
  const MvnResult r = mvn_cdf(b, corr, tol);

  JointOutageProbability out;
  out.value = r.value;
  out.abs_error_estimate = r.abs_error_estimate;
  out.tolerance_met = r.tolerance_met;

  // Frechet-Hoeffding bounds.
  double p_min = 1.0, p_sum = 0.0;
  for (const auto& m : marginals) {
    p_min = std::min(p_min, m.p);
    p_sum += m.p;
  }
  const double lower = std::max(0.0, p_sum - (k - 1));
  const double slack = std::max(out.abs_error_estimate, 1e-12);
  if (out.value > p_min + slack || out.value < lower - slack) {
    throw ValidationError("joint probability violates Frechet-Hoeffding bounds");
  }
  out.value = std::min(std::max(out.value, lower), p_min);
  return out;
}

JointOutageProbability contingency_probability_detail(const GridCase& gcase,
                                                      const std::vector<int>& branch_set,
                                                      const CorrelationModel& model) {
  const int k = static_cast<int>(branch_set.size());
  if (k != 2 && k != 3) throw DomainError("contingency probability requires |omega| in {2, 3}");
  std::vector<Marginal> marginals;
  marginals.reserve(branch_set.size());
  for (int id : branch_set) {
    marginals.push_back(calibrate_marginal(gcase.branch_outage_probability(id)));
  }
  CorrelationModel m = model;
  if (!m.branch_distance_km) {
    m.branch_distance_km = [&gcase](int a, int b) {
      return branch_distance(branch_segment(gcase, a), branch_segment(gcase, b));
    };
  }
  const CovarianceMatrix cov = build_covariance(marginals, m, branch_set);
  return joint_outage_probability(marginals, cov);
}

double contingency_probability(const GridCase& gcase, const std::vector<int>& branch_set,
                               const CorrelationModel& model) {
  return contingency_probability_detail(gcase, branch_set, model).value;
}

JointOutageProbability ProbabilityCache::get_or_compute(const GridCase& gcase,
                                                        const std::vector<int>& branch_set,
                                                        const CorrelationModel& model) {
  std::vector<int> key_ids(branch_set);
  std::sort(key_ids.begin(), key_ids.end());
  const auto key = std::make_pair(key_ids, std::make_pair(model.rho0, model.length_km));
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  const JointOutageProbability value = contingency_probability_detail(gcase, key_ids, model);
  std::lock_guard<std::mutex> lock(mu_);
  return map_.emplace(key, value).first->second;
}

std::size_t ProbabilityCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

}  // namespace gridrisk
