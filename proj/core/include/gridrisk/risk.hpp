#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridrisk/copula.hpp"
#include "gridrisk/random_chemistry.hpp"

namespace gridrisk {

struct RiskTerm {
  Malignancy omega;
  double p_omega = 0.0;
  double s_omega_mw = 0.0;
  double r_omega_mw = 0.0;  // p * s
};

// Set-size policy per order k: Exact trusts the sampled unique set as the
// complete one (requires a flat trailing accumulation window), Count supplies
// |Omega_k| directly, Bounds supplies (lower, upper) estimates.
struct SetSizePolicy {
  enum class Kind { Exact, Count, Bounds };
  Kind kind = Kind::Exact;
  double count = 0.0;
  double lower = 0.0;
  double upper = 0.0;

  static SetSizePolicy exact() { return {Kind::Exact, 0.0, 0.0, 0.0}; }
  static SetSizePolicy exact_count(double n) { return {Kind::Count, n, 0.0, 0.0}; }
  static SetSizePolicy bounds(double lo, double hi) { return {Kind::Bounds, 0.0, lo, hi}; }
};

struct RiskEstimate {
  struct PerK {
    double r_low = 0.0;   // MW
    double r_high = 0.0;  // equals r_low unless a Bounds policy was used
    double scaling_low = 1.0;
    double scaling_high = 1.0;
    long sampled_unique = 0;
    double sum_r_sampled = 0.0;
  };
  std::map<int, PerK> per_k;
  double total_low = 0.0;
  double total_high = 0.0;
  bool has_bounds = false;
  std::vector<std::string> warnings;

  double share_of_order_low(int k) const;
  double share_of_order_high(int k) const;
};

struct RiskOptions {
  // Trailing fraction of trials that must add no new unique set before an
  // Exact policy is accepted.
  double flat_window_fraction = 0.20;
  // Highest contingency order included in the risk sum; discoveries of
  // higher order are reported in a warning and excluded.
  int k_max = 3;
};

RiskTerm risk_for_set(const GridCase& gcase, const Malignancy& omega,
                      const CorrelationModel& model, ProbabilityCache* cache = nullptr);

// R_hat_k = (|Omega_k| / |Omega_k^sampled|) * sum of p*s over the sampled
// unique sets; total sums over k.  Every k present in the ledger needs a
// policy.
RiskEstimate estimate_risk(const GridCase& gcase, const CampaignLedger& ledger,
                           const CorrelationModel& model,
                           const std::map<int, SetSizePolicy>& policies,
                           const RiskOptions& options = {}, ProbabilityCache* cache = nullptr);

struct RiskGridRow {
  double rho0 = 0.0;
  double length_km = 0.0;
  RiskEstimate estimate;
};

std::vector<RiskGridRow> risk_grid(const GridCase& gcase, const CampaignLedger& ledger,
                                   const std::vector<double>& rho0_values,
                                   const std::vector<double>& length_values,
                                   const std::map<int, SetSizePolicy>& policies,
                                   const RiskOptions& options = {},
                                   ProbabilityCache* cache = nullptr);

struct LoadSweepRow {
  double factor = 1.0;
  long unique_k2 = 0;
  long trials_aborted = 0;
  RiskEstimate estimate;
};

struct LoadSweepConfig {
  RCScheme scheme;
  SimConfig sim;
  long trials_per_level = 0;
  std::uint64_t seed = 0;
  int workers = 1;
};

// Fresh campaign per load level (injections change, so ledgers cannot be
// reused); N-2 risk per factor, output sorted by ascending factor.
std::vector<LoadSweepRow> load_sweep(const GridCase& gcase, std::vector<double> factors,
                                     const CorrelationModel& model,
                                     const LoadSweepConfig& config);

}  // namespace gridrisk
