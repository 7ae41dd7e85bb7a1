#pragma once

#include <map>
#include <utility>
#include <vector>

#include "gridrisk/cascade.hpp"
#include "gridrisk/random_chemistry.hpp"

namespace gridrisk {

// Occurrences of each branch pair within the unique N-3 malignancies.
struct PairFrequency {
  std::map<std::pair<int, int>, int> counts;

  // Top-m pairs by count, ties broken by lexicographic pair id.
  std::vector<std::pair<std::pair<int, int>, int>> top(int m) const;
};

// Chao's capture-recapture lower bound: unique + n1^2/(2 n2), where n1/n2
// count sets found exactly once/twice.  When n2 = 0 the bias-corrected form
// n1 (n1 - 1) / (2 (n2 + 1)) is used.
double chao_estimate(const CampaignLedger& ledger, int k);

PairFrequency pair_frequencies(const CampaignLedger& ledger);

struct RcpConfig {
  double stability_window_fraction = 0.10;
  long stability_min_trials = 1000;
  SimConfig sim;
  int workers = 1;
};

struct SetSizeBounds {
  double chao_lower = 0.0;
  double rcp_upper = 0.0;
  long n1 = 0;
  long n2 = 0;
  std::pair<int, int> pair_max{0, 0};
  double q_proportion = 0.0;
  long unique_found = 0;
};

// Random Chemistry Proportional upper bound on |Omega_3|: verify that
// Pair_max is unchanged over the trailing stability window, brute-force all
// triples containing Pair_max, compute the found proportion q, and scale the
// unique total by 1/q.  Chao's lower bound rides along in the result.
SetSizeBounds rcp_estimate(const GridCase& gcase, const CampaignLedger& ledger,
                           const RcpConfig& config);

struct UndersamplingRow {
  std::pair<int, int> pair{0, 0};
  long rc_found = 0;
  long true_count = 0;
  double proportion = 0.0;
};

// Per top-m pair: how many of the true triples containing it the campaign
// found.  Validates the RCP premise (frequent pairs are under-sampled).
std::vector<UndersamplingRow> undersampling_report(const GridCase& gcase,
                                                   const CampaignLedger& ledger, int top_m,
                                                   const RcpConfig& config);

}  // namespace gridrisk
