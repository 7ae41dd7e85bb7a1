#include "gridrisk/risk.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gridrisk/rng.hpp"

namespace gridrisk {

double RiskEstimate::share_of_order_low(int k) const {
  auto it = per_k.find(k);
  if (it == per_k.end() || total_low <= 0.0) return 0.0;
  // Low share pairs the low k-estimate with the other orders' high values.
  double others_high = 0.0;
  for (const auto& [kk, pk] : per_k) {
    if (kk != k) others_high += pk.r_high;
  }
  const double denom = it->second.r_low + others_high;
  return denom > 0.0 ? it->second.r_low / denom : 0.0;
}

double RiskEstimate::share_of_order_high(int k) const {
  auto it = per_k.find(k);
  if (it == per_k.end()) return 0.0;
  double others_low = 0.0;
  for (const auto& [kk, pk] : per_k) {
    if (kk != k) others_low += pk.r_low;
  }
  const double denom = it->second.r_high + others_low;
  return denom > 0.0 ? it->second.r_high / denom : 0.0;
}

RiskTerm risk_for_set(const GridCase& gcase, const Malignancy& omega,
                      const CorrelationModel& model, ProbabilityCache* cache) {
  RiskTerm term;
  term.omega = omega;
  term.s_omega_mw = omega.blackout_size_mw;
  term.p_omega = cache ? cache->get_or_compute(gcase, omega.branches, model).value
                       : contingency_probability(gcase, omega.branches, model);
  term.r_omega_mw = term.p_omega * term.s_omega_mw;
  return term;
}

namespace {

// True when the trailing window of trials added no new unique set of order k.
bool accumulation_flat(const CampaignLedger& ledger, int k, double window_fraction) {
  const long trials = ledger.trials_run;
  const long cutoff = trials - static_cast<long>(std::floor(window_fraction * trials));
  std::set<std::vector<int>> before;
  bool grew_in_window = false;
  for (const auto& d : ledger.discoveries()) {
    if (d.malignancy.order() != k) continue;
    if (d.trial <= cutoff) {
      before.insert(d.malignancy.branches);
    } else if (!before.count(d.malignancy.branches)) {
      grew_in_window = true;
      break;
    }
  }
  return !grew_in_window;
}

}  // namespace

RiskEstimate estimate_risk(const GridCase& gcase, const CampaignLedger& ledger,
                           const CorrelationModel& model,
                           const std::map<int, SetSizePolicy>& policies,
                           const RiskOptions& options, ProbabilityCache* cache) {
  std::set<int> orders;
  for (const auto& [key, count] : ledger.unique_counts()) {
    (void)count;
    orders.insert(static_cast<int>(key.size()));
  }
  if (orders.empty()) throw EmptyLedger("ledger has no discoveries");

  RiskEstimate est;
  for (int k : orders) {
    if (k > options.k_max) {
      est.warnings.push_back("k=" + std::to_string(k) +
                             " discoveries excluded (beyond k_max=" +
                             std::to_string(options.k_max) + ")");
      continue;
    }
    auto pit = policies.find(k);
    if (pit == policies.end()) {
      throw MissingSetSize("no set-size policy for k = " + std::to_string(k));
    }
    const SetSizePolicy& policy = pit->second;
    const auto unique = ledger.unique_of_order(k);
    RiskEstimate::PerK pk;
    pk.sampled_unique = static_cast<long>(unique.size());
    for (const auto& m : unique) {
      pk.sum_r_sampled += risk_for_set(gcase, m, model, cache).r_omega_mw;
    }
    const double sampled = static_cast<double>(pk.sampled_unique);
    switch (policy.kind) {
      case SetSizePolicy::Kind::Exact:
        if (!accumulation_flat(ledger, k, options.flat_window_fraction)) {
          est.warnings.push_back("k=" + std::to_string(k) +
                                 ": accumulation still growing in the trailing window");
          throw MissingSetSize("k=" + std::to_string(k) +
                               " accumulation is not flat; supply an explicit set size");
        }
        pk.scaling_low = pk.scaling_high = 1.0;
        break;
      case SetSizePolicy::Kind::Count:
        if (policy.count < sampled) {
          throw ValidationError("set size below the sampled unique count for k = " +
                                std::to_string(k));
        }
        pk.scaling_low = pk.scaling_high = policy.count / sampled;
        break;
      case SetSizePolicy::Kind::Bounds:
        if (policy.lower > policy.upper) throw ValidationError("set-size lower bound > upper");
        if (policy.upper < sampled) {
          throw ValidationError("set-size upper bound below the sampled unique count for k = " +
                                std::to_string(k));
        }
        pk.scaling_low = std::max(policy.lower, sampled) / sampled;
        pk.scaling_high = policy.upper / sampled;
        est.has_bounds = true;
        break;
    }
    pk.r_low = pk.scaling_low * pk.sum_r_sampled;
    pk.r_high = pk.scaling_high * pk.sum_r_sampled;
    est.per_k[k] = pk;
  }
  for (const auto& [k, pk] : est.per_k) {
    (void)k;
    est.total_low += pk.r_low;
    est.total_high += pk.r_high;
  }
  return est;
}

std::vector<RiskGridRow> risk_grid(const GridCase& gcase, const CampaignLedger& ledger,
                                   const std::vector<double>& rho0_values,
                                   const std::vector<double>& length_values,
                                   const std::map<int, SetSizePolicy>& policies,
                                   const RiskOptions& options, ProbabilityCache* cache) {
  std::vector<RiskGridRow> rows;
  for (double rho0 : rho0_values) {
    for (double length : length_values) {
      RiskGridRow row;
      row.rho0 = rho0;
      row.length_km = length;
      const CorrelationModel model = spatial_correlation_model(gcase, rho0, length);
      row.estimate = estimate_risk(gcase, ledger, model, policies, options, cache);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<LoadSweepRow> load_sweep(const GridCase& gcase, std::vector<double> factors,
                                     const CorrelationModel& model,
                                     const LoadSweepConfig& config) {
  if (factors.empty()) throw ValidationError("load sweep requires at least one factor");
  if (config.trials_per_level < 1) throw ValidationError("trials_per_level must be >= 1");
  std::sort(factors.begin(), factors.end());

  std::vector<LoadSweepRow> rows;
  for (double factor : factors) {
    const GridCase scaled = scale_load(gcase, factor);

    CampaignConfig cc;
    cc.scheme = config.scheme;
    cc.sim = config.sim;
    cc.n_trials = config.trials_per_level;
    cc.seed = derive_seed(config.seed, static_cast<std::uint64_t>(rows.size()));
    cc.workers = config.workers;
    const CampaignLedger ledger = run_campaign(scaled, cc);

    LoadSweepRow row;
    row.factor = factor;
    row.trials_aborted = ledger.trials_aborted;
    row.unique_k2 = ledger.unique_count(2);

    CorrelationModel scaled_model = spatial_correlation_model(scaled, model.rho0, model.length_km);
    // N-2 risk only; higher orders are dropped from the per-level ledger.
    CampaignLedger k2_only;
    for (const auto& d : ledger.discoveries()) {
      if (d.malignancy.order() == 2) k2_only.add(d.trial, d.malignancy);
    }
    k2_only.trials_run = ledger.trials_run;
    k2_only.trials_aborted = ledger.trials_aborted;
    if (k2_only.discoveries().empty()) {
      row.estimate = RiskEstimate{};
      row.estimate.warnings.push_back("no N-2 malignancies found at this load level");
    } else {
      std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(
                                                    static_cast<double>(k2_only.unique_count(2)))}};
      row.estimate = estimate_risk(scaled, k2_only, scaled_model, policies);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace gridrisk
