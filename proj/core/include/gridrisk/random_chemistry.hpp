#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gridrisk/cascade.hpp"
#include "gridrisk/grid_case.hpp"

namespace gridrisk {

// Subset reduction scheme {a_1, ..., a_final}; strictly decreasing,
// a_final >= 2.  Auto-generated schemes halve down to 20 and then divide by
// 1.5 (rounding up) down to a_final.
struct RCScheme {
  std::vector<int> sizes;
  int max_subsamples = 20;

  static RCScheme auto_for(int n_branches, int a_final = 5);
  static RCScheme from_sizes(std::vector<int> sizes, int max_subsamples = 20);
  void validate(int n_branches) const;
  int stages() const { return static_cast<int>(sizes.size()); }
};

// A minimal blackout-causing branch set and the MW it sheds.
struct Malignancy {
  std::vector<int> branches;  // sorted ascending
  double blackout_size_mw = 0.0;

  int order() const { return static_cast<int>(branches.size()); }
};

struct Discovery {
  long trial = 0;  // 1-based trial index within the campaign
  Malignancy malignancy;
};

class CampaignLedger {
 public:
  void add(long trial, Malignancy m);

  const std::vector<Discovery>& discoveries() const { return discoveries_; }
  const std::map<std::vector<int>, int>& unique_counts() const { return unique_counts_; }

  long trials_run = 0;
  long trials_aborted = 0;

  // Unique malignancies of the given order, ledger (first-seen) order.
  std::vector<Malignancy> unique_of_order(int k) const;
  // Multiplicity per unique set of the given order.
  std::map<std::vector<int>, int> counts_of_order(int k) const;
  long unique_count(int k) const;

  // JSON-lines persistence: {"trial": t, "branches": [...], "shed_mw": s}
  // per discovery, plus a .meta.json sidecar carrying campaign bookkeeping.
  void save(const std::string& path) const;
  static CampaignLedger load(const std::string& path);

  std::uint64_t seed = 0;
  std::vector<int> scheme_sizes;
  int max_subsamples = 0;

 private:
  std::vector<Discovery> discoveries_;
  std::map<std::vector<int>, int> unique_counts_;
  std::map<std::vector<int>, double> shed_by_set_;
};

struct RcTrialResult {
  std::optional<Malignancy> malignancy;  // empty -> aborted
  long simulations = 0;
};

// One Random Chemistry trial: find a blackout-causing set of size a_1 among
// all branches, shrink it through the scheme (up to max_subsamples random
// subsets per stage, else abort), then search subsets of the final set
// bottom-up in randomized order starting from k = 2; the first blackout
// subset found is minimal because every smaller subset has already failed.
RcTrialResult rc_trial(const GridCase& gcase, const RCScheme& scheme, const SimConfig& sim,
                       std::uint64_t seed);

struct CampaignConfig {
  RCScheme scheme;
  SimConfig sim;
  long n_trials = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  long checkpoint_every = 0;     // 0 -> only final write
  std::string checkpoint_path;   // empty -> in-memory only
  bool resume = true;            // continue from an existing checkpoint
};

// Runs n_trials independent trials with per-trial seeds derived from
// (campaign seed, trial index); the ledger is identical for any worker
// count.  With a checkpoint path the ledger is persisted every
// checkpoint_every trials and a restarted campaign resumes after the last
// completed trial.
CampaignLedger run_campaign(const GridCase& gcase, const CampaignConfig& config);

// (cumulative discoveries, cumulative unique) pairs in trial order.
std::vector<std::pair<long, long>> accumulation_curve(const CampaignLedger& ledger);

// Exact Omega_2 by pair enumeration (the reference oracle for campaigns).
// Pairs containing a single-branch blackout set are excluded as non-minimal.
std::vector<Malignancy> brute_force_k2(const GridCase& gcase, const SimConfig& sim = {},
                                       int workers = 1);

// All minimal triples {pair, b}: the triple causes a blackout and neither
// {pair.first, b} nor {pair.second, b} does.  Throws NotMinimalizable when
// the pair is itself a blackout set.
std::vector<Malignancy> brute_force_k3_containing_pair(const GridCase& gcase,
                                                       std::pair<int, int> pair,
                                                       const SimConfig& sim = {},
                                                       int workers = 1);

// Full Omega_3 enumeration; feasible only on small cases (guarded warning
// above ~1e6 triples is the caller's concern).  Minimality is checked
// against Omega_2 and single-branch blackout sets.
std::vector<Malignancy> brute_force_k3(const GridCase& gcase, const SimConfig& sim = {},
                                       int workers = 1);

// Re-simulates every proper subset of size >= 2 and confirms none causes a
// blackout (and the set itself does).
bool verify_minimal(const GridCase& gcase, const Malignancy& m, const SimConfig& sim = {});

}  // namespace gridrisk
