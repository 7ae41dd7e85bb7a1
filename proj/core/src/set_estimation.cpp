#include "gridrisk/set_estimation.hpp"

#include <algorithm>
#include <cmath>

namespace gridrisk {

std::vector<std::pair<std::pair<int, int>, int>> PairFrequency::top(int m) const {
  std::vector<std::pair<std::pair<int, int>, int>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (m >= 0 && static_cast<std::size_t>(m) < rows.size()) rows.resize(static_cast<std::size_t>(m));
  return rows;
}

double chao_estimate(const CampaignLedger& ledger, int k) {
  const auto counts = ledger.counts_of_order(k);
  if (counts.empty()) {
    throw InsufficientData("no discoveries of order " + std::to_string(k));
  }
  long n1 = 0, n2 = 0;
  for (const auto& [key, c] : counts) {
    (void)key;
    if (c == 1) ++n1;
    if (c == 2) ++n2;
  }
  const double unique = static_cast<double>(counts.size());
  if (n2 > 0) return unique + static_cast<double>(n1) * n1 / (2.0 * n2);
  return unique + static_cast<double>(n1) * (n1 - 1) / (2.0 * (n2 + 1));
}

namespace {

PairFrequency pair_frequencies_of(const std::vector<Malignancy>& unique_triples) {
  PairFrequency pf;
  for (const auto& m : unique_triples) {
    const auto& b = m.branches;
    pf.counts[{b[0], b[1]}] += 1;
    pf.counts[{b[0], b[2]}] += 1;
    pf.counts[{b[1], b[2]}] += 1;
  }
  return pf;
}

std::pair<int, int> pair_max_of(const PairFrequency& pf) {
  auto rows = pf.top(1);
  return rows.empty() ? std::pair<int, int>{0, 0} : rows[0].first;
}

// Unique triples discovered at or before the given trial index.
std::vector<Malignancy> unique_triples_up_to(const CampaignLedger& ledger, long trial_limit) {
  std::vector<Malignancy> out;
  std::map<std::vector<int>, bool> seen;
  for (const auto& d : ledger.discoveries()) {
    if (d.trial > trial_limit) break;
    if (d.malignancy.order() != 3) continue;
    if (seen.emplace(d.malignancy.branches, true).second) out.push_back(d.malignancy);
  }
  return out;
}

}  // namespace

PairFrequency pair_frequencies(const CampaignLedger& ledger) {
  const auto triples = ledger.unique_of_order(3);
  if (triples.empty()) throw InsufficientData("ledger has no N-3 malignancies");
  return pair_frequencies_of(triples);
}

SetSizeBounds rcp_estimate(const GridCase& gcase, const CampaignLedger& ledger,
                           const RcpConfig& config) {
  const auto triples = ledger.unique_of_order(3);
  if (triples.empty()) throw InsufficientData("ledger has no N-3 malignancies");

  const long trials = ledger.trials_run;
  const long window = std::max(
      static_cast<long>(std::ceil(config.stability_window_fraction * static_cast<double>(trials))),
      config.stability_min_trials);
  if (window >= trials) {
    throw Unstable("campaign too short for the stability window (" + std::to_string(window) +
                   " of " + std::to_string(trials) + " trials)");
  }

  const PairFrequency now = pair_frequencies_of(triples);
  const auto before = unique_triples_up_to(ledger, trials - window);
  if (before.empty()) {
    throw Unstable("no N-3 malignancies before the stability window");
  }
  const auto pmax_now = pair_max_of(now);
  const auto pmax_before = pair_max_of(pair_frequencies_of(before));
  if (pmax_now != pmax_before) {
    throw Unstable("Pair_max changed within the stability window");
  }

  const auto true_triples =
      brute_force_k3_containing_pair(gcase, pmax_now, config.sim, config.workers);
  long rc_found = 0;
  for (const auto& m : triples) {
    if (std::binary_search(m.branches.begin(), m.branches.end(), pmax_now.first) &&
        std::binary_search(m.branches.begin(), m.branches.end(), pmax_now.second)) {
      ++rc_found;
    }
  }
  if (true_triples.empty() || rc_found == 0) {
    throw InsufficientData("Pair_max has no brute-force triples to scale against");
  }

  SetSizeBounds bounds;
  bounds.unique_found = static_cast<long>(triples.size());
  bounds.chao_lower = chao_estimate(ledger, 3);
  bounds.pair_max = pmax_now;
  bounds.q_proportion = static_cast<double>(rc_found) / static_cast<double>(true_triples.size());
  bounds.rcp_upper = static_cast<double>(triples.size()) / bounds.q_proportion;

  const auto counts = ledger.counts_of_order(3);
  for (const auto& [key, c] : counts) {
    (void)key;
    if (c == 1) ++bounds.n1;
    if (c == 2) ++bounds.n2;
  }
  return bounds;
}

std::vector<UndersamplingRow> undersampling_report(const GridCase& gcase,
                                                   const CampaignLedger& ledger, int top_m,
                                                   const RcpConfig& config) {
  const auto triples = ledger.unique_of_order(3);
  if (triples.empty()) throw InsufficientData("ledger has no N-3 malignancies");
  const PairFrequency pf = pair_frequencies_of(triples);

  std::vector<UndersamplingRow> rows;
  for (const auto& [pair, rc_count] : pf.top(top_m)) {
    UndersamplingRow row;
    row.pair = pair;
    row.rc_found = rc_count;
    try {
      const auto true_triples =
          brute_force_k3_containing_pair(gcase, pair, config.sim, config.workers);
      row.true_count = static_cast<long>(true_triples.size());
      row.proportion = row.true_count > 0
                           ? static_cast<double>(rc_count) / static_cast<double>(row.true_count)
                           : 0.0;
    } catch (const NotMinimalizable&) {
      row.true_count = 0;
      row.proportion = 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gridrisk
