#include "gridrisk/random_chemistry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gridrisk/parallel.hpp"
#include "gridrisk/rng.hpp"

namespace gridrisk {

using nlohmann::json;

RCScheme RCScheme::auto_for(int n_branches, int a_final) {
  if (n_branches < 2) throw ValidationError("case must have at least 2 branches");
  if (a_final < 2) throw ValidationError("a_final must be at least 2");
  // a_1: smallest power-of-two multiple of 20 at or above N/40, clamped to N.
  int a1 = 20;
  while (a1 < (n_branches + 39) / 40) a1 *= 2;
  a1 = std::min(a1, n_branches);

  RCScheme scheme;
  int s = a1;
  scheme.sizes.push_back(s);
  while (s > 20) {
    s = (s + 1) / 2;
    scheme.sizes.push_back(s);
  }
  while (s > a_final) {
    const int next = static_cast<int>(std::ceil(static_cast<double>(s) / 1.5));
    s = next < s ? next : s - 1;
    if (s <= a_final) s = a_final;
    scheme.sizes.push_back(s);
  }
  if (scheme.sizes.back() != a_final && a_final < a1) scheme.sizes.push_back(a_final);
  scheme.validate(n_branches);
  return scheme;
}

RCScheme RCScheme::from_sizes(std::vector<int> sizes, int max_subsamples) {
  RCScheme scheme;
  scheme.sizes = std::move(sizes);
  scheme.max_subsamples = max_subsamples;
  return scheme;
}

void RCScheme::validate(int n_branches) const {
  if (sizes.empty()) throw ValidationError("scheme has no sizes");
  if (sizes.front() > n_branches)
    throw ValidationError("a_1 exceeds the number of branches");
  if (sizes.back() < 2) throw ValidationError("a_final must be at least 2");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] >= sizes[i - 1]) throw ValidationError("scheme sizes must strictly decrease");
  }
  if (max_subsamples < 1) throw ValidationError("max_subsamples must be positive");
}

void CampaignLedger::add(long trial, Malignancy m) {
  std::sort(m.branches.begin(), m.branches.end());
  unique_counts_[m.branches] += 1;
  shed_by_set_.emplace(m.branches, m.blackout_size_mw);
  discoveries_.push_back({trial, std::move(m)});
}

std::vector<Malignancy> CampaignLedger::unique_of_order(int k) const {
  std::vector<Malignancy> out;
  std::map<std::vector<int>, bool> seen;
  for (const auto& d : discoveries_) {
    if (d.malignancy.order() != k) continue;
    if (seen.emplace(d.malignancy.branches, true).second) out.push_back(d.malignancy);
  }
  return out;
}

std::map<std::vector<int>, int> CampaignLedger::counts_of_order(int k) const {
  std::map<std::vector<int>, int> out;
  for (const auto& [key, count] : unique_counts_) {
    if (static_cast<int>(key.size()) == k) out[key] = count;
  }
  return out;
}

long CampaignLedger::unique_count(int k) const {
  long n = 0;
  for (const auto& [key, count] : unique_counts_) {
    (void)count;
    if (static_cast<int>(key.size()) == k) ++n;
  }
  return n;
}

void CampaignLedger::save(const std::string& path) const {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write ledger '" + path + "'");
    for (const auto& d : discoveries_) {
      json j;
      j["trial"] = d.trial;
      j["branches"] = d.malignancy.branches;
      j["shed_mw"] = d.malignancy.blackout_size_mw;
      out << j.dump() << "\n";
    }
  }
  std::filesystem::rename(tmp, path);

  json meta;
  meta["seed"] = seed;
  meta["scheme"] = scheme_sizes;
  meta["max_subsamples"] = max_subsamples;
  meta["trials_run"] = trials_run;
  meta["trials_aborted"] = trials_aborted;
  std::ofstream mf(path + ".meta.json", std::ios::binary);
  if (!mf) throw IoError("cannot write ledger metadata for '" + path + "'");
  mf << meta.dump(2) << "\n";
}

CampaignLedger CampaignLedger::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open ledger '" + path + "'");
  CampaignLedger ledger;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("ledger line " + std::to_string(lineno) + ": " + e.what());
    }
    Malignancy m;
    m.branches = j.at("branches").get<std::vector<int>>();
    m.blackout_size_mw = j.at("shed_mw").get<double>();
    ledger.add(j.at("trial").get<long>(), std::move(m));
  }
  std::ifstream mf(path + ".meta.json", std::ios::binary);
  if (mf) {
    json meta = json::parse(mf, nullptr, /*allow_exceptions=*/false);
    if (!meta.is_discarded()) {
      ledger.seed = meta.value("seed", std::uint64_t{0});
      ledger.scheme_sizes = meta.value("scheme", std::vector<int>{});
      ledger.max_subsamples = meta.value("max_subsamples", 0);
      ledger.trials_run = meta.value("trials_run", long{0});
      ledger.trials_aborted = meta.value("trials_aborted", long{0});
    }
  }
  if (ledger.trials_run == 0 && !ledger.discoveries_.empty()) {
    ledger.trials_run = ledger.discoveries_.back().trial;
  }
  return ledger;
}

namespace {

// All k-combinations of items, then shuffled; the bottom-up search must
// visit subsets of a given size in uniformly random order.
std::vector<std::vector<int>> combinations(const std::vector<int>& items, int k) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(items.size());
  if (k > n || k <= 0) return out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    std::vector<int> combo;
    combo.reserve(static_cast<std::size_t>(k));
    for (int i : idx) combo.push_back(items[static_cast<std::size_t>(i)]);
    out.push_back(std::move(combo));
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

RcTrialResult rc_trial(const GridCase& gcase, const RCScheme& scheme, const SimConfig& sim,
                       std::uint64_t seed) {
  scheme.validate(gcase.n_branches());
  Rng rng(seed);
  RcTrialResult result;

  auto blackout = [&](const std::vector<int>& set) {
    ++result.simulations;
    return is_blackout_set(gcase, set, sim);
  };

  // Stage 0 samples from the universal set; later stages from the current set.
  std::vector<int> current = gcase.branch_ids();
  std::sort(current.begin(), current.end());
  for (int stage = 0; stage < scheme.stages(); ++stage) {
    const int target = scheme.sizes[static_cast<std::size_t>(stage)];
    if (static_cast<int>(current.size()) == target) {
      // Degenerate stage (a_1 == N): every sample equals the parent set.
      if (blackout(current)) continue;
      return result;
    }
    bool found = false;
    for (int attempt = 0; attempt < scheme.max_subsamples; ++attempt) {
      std::vector<int> candidate = rng.sample_subset(current, static_cast<std::size_t>(target));
      if (blackout(candidate)) {
        current = std::move(candidate);
        found = true;
        break;
      }
    }
    if (!found) return result;  // aborted
  }

  // Bottom-up minimality search over the final set, k = 2 upward.
  std::sort(current.begin(), current.end());
  for (int k = 2; k <= static_cast<int>(current.size()); ++k) {
    auto subsets = combinations(current, k);
    rng.shuffle(subsets);
    for (auto& subset : subsets) {
      ++result.simulations;
      const CascadeOutcome outcome = simulate(gcase, subset, sim);
      if (outcome.is_blackout) {
        Malignancy m;
        std::sort(subset.begin(), subset.end());
        m.branches = std::move(subset);
        m.blackout_size_mw = outcome.load_shed_mw;
        result.malignancy = std::move(m);
        return result;
      }
    }
  }
  // Unreachable when the final stage set causes a blackout, but guard anyway.
  return result;
}

CampaignLedger run_campaign(const GridCase& gcase, const CampaignConfig& config) {
  if (config.n_trials < 1) throw ValidationError("campaign requires n_trials >= 1");
  config.scheme.validate(gcase.n_branches());

  CampaignLedger ledger;
  ledger.seed = config.seed;
  ledger.scheme_sizes = config.scheme.sizes;
  ledger.max_subsamples = config.scheme.max_subsamples;

  long start_trial = 1;
  if (!config.checkpoint_path.empty() && config.resume &&
      std::filesystem::exists(config.checkpoint_path)) {
    ledger = CampaignLedger::load(config.checkpoint_path);
    if (ledger.seed != config.seed || ledger.scheme_sizes != config.scheme.sizes) {
      throw ValidationError("checkpoint '" + config.checkpoint_path +
                            "' was produced by a different campaign (seed/scheme mismatch)");
    }
    start_trial = ledger.trials_run + 1;
  }

  const long block = config.checkpoint_every > 0 ? config.checkpoint_every : config.n_trials;
  for (long lo = start_trial; lo <= config.n_trials; lo += block) {
    const long hi = std::min(config.n_trials, lo + block - 1);
    const long count = hi - lo + 1;
    std::vector<RcTrialResult> results(static_cast<std::size_t>(count));
    parallel_for_index(static_cast<std::uint64_t>(count), config.workers,
                       [&](std::uint64_t i) {
                         const long trial = lo + static_cast<long>(i);
                         results[i] = rc_trial(gcase, config.scheme, config.sim,
                                               derive_seed(config.seed,
                                                           static_cast<std::uint64_t>(trial)));
                       });
    for (long i = 0; i < count; ++i) {
      auto& r = results[static_cast<std::size_t>(i)];
      ledger.trials_run += 1;
      if (r.malignancy) {
        ledger.add(lo + i, std::move(*r.malignancy));
      } else {
        ledger.trials_aborted += 1;
      }
    }
    if (!config.checkpoint_path.empty()) ledger.save(config.checkpoint_path);
  }
  return ledger;
}

std::vector<std::pair<long, long>> accumulation_curve(const CampaignLedger& ledger) {
  if (ledger.discoveries().empty()) throw EmptyLedger("ledger has no discoveries");
  std::vector<std::pair<long, long>> curve;
  curve.reserve(ledger.discoveries().size());
  std::map<std::vector<int>, bool> seen;
  long unique = 0;
  long total = 0;
  for (const auto& d : ledger.discoveries()) {
    ++total;
    if (seen.emplace(d.malignancy.branches, true).second) ++unique;
    curve.emplace_back(total, unique);
  }
  return curve;
}

namespace {

std::vector<int> single_branch_blackouts(const GridCase& gcase, const SimConfig& sim,
                                         int workers) {
  const auto ids = gcase.branch_ids();
  std::vector<char> hit(ids.size(), 0);
  parallel_for_index(ids.size(), workers, [&](std::uint64_t i) {
    hit[i] = is_blackout_set(gcase, {ids[i]}, sim) ? 1 : 0;
  });
  std::vector<int> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (hit[i]) out.push_back(ids[i]);
  }
  return out;
}

}  // namespace

std::vector<Malignancy> brute_force_k2(const GridCase& gcase, const SimConfig& sim,
                                       int workers) {
  std::vector<int> ids = gcase.branch_ids();
  std::sort(ids.begin(), ids.end());
  const std::uint64_t n = ids.size();
  if (n * (n - 1) / 2 > 1'000'000) {
    std::fprintf(stderr,
                 "warning: brute-force pair scan over %llu candidates; this will take a while\n",
                 static_cast<unsigned long long>(n * (n - 1) / 2));
  }
  const auto singles = single_branch_blackouts(gcase, sim, workers);

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) pairs.emplace_back(ids[i], ids[j]);
  }
  std::vector<double> shed(pairs.size(), -1.0);
  parallel_for_index(pairs.size(), workers, [&](std::uint64_t i) {
    const auto [a, b] = pairs[i];
    if (std::binary_search(singles.begin(), singles.end(), a) ||
        std::binary_search(singles.begin(), singles.end(), b)) {
      return;  // superset of a single-branch blackout set: not minimal
    }
    const CascadeOutcome outcome = simulate(gcase, {a, b}, sim);
    if (outcome.is_blackout) shed[i] = outcome.load_shed_mw;
  });

  std::vector<Malignancy> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (shed[i] >= 0.0) out.push_back({{pairs[i].first, pairs[i].second}, shed[i]});
  }
  return out;
}

std::vector<Malignancy> brute_force_k3_containing_pair(const GridCase& gcase,
                                                       std::pair<int, int> pair,
                                                       const SimConfig& sim, int workers) {
  if (pair.first == pair.second) throw ValidationError("pair must contain two distinct branches");
  if (pair.first > pair.second) std::swap(pair.first, pair.second);
  if (is_blackout_set(gcase, {pair.first, pair.second}, sim)) {
    throw NotMinimalizable("pair {" + std::to_string(pair.first) + ", " +
                           std::to_string(pair.second) + "} is itself a blackout set");
  }

  std::vector<int> ids = gcase.branch_ids();
  std::sort(ids.begin(), ids.end());
  std::vector<double> shed(ids.size(), -1.0);
  parallel_for_index(ids.size(), workers, [&](std::uint64_t i) {
    const int b = ids[i];
    if (b == pair.first || b == pair.second) return;
    const CascadeOutcome outcome = simulate(gcase, {pair.first, pair.second, b}, sim);
    if (!outcome.is_blackout) return;
    // Minimal iff neither new pair is a blackout set (the given pair is not).
    if (is_blackout_set(gcase, {pair.first, b}, sim)) return;
    if (is_blackout_set(gcase, {pair.second, b}, sim)) return;
    shed[i] = outcome.load_shed_mw;
  });

  std::vector<Malignancy> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (shed[i] < 0.0) continue;
    std::vector<int> branches{pair.first, pair.second, ids[i]};
    std::sort(branches.begin(), branches.end());
    out.push_back({std::move(branches), shed[i]});
  }
  return out;
}

std::vector<Malignancy> brute_force_k3(const GridCase& gcase, const SimConfig& sim,
                                       int workers) {
  std::vector<int> ids = gcase.branch_ids();
  std::sort(ids.begin(), ids.end());
  const auto k2 = brute_force_k2(gcase, sim, workers);
  std::set<std::pair<int, int>> k2_keys;
  for (const auto& m : k2) k2_keys.insert({m.branches[0], m.branches[1]});
  const auto singles = single_branch_blackouts(gcase, sim, workers);

  std::vector<std::vector<int>> triples;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      for (std::size_t l = j + 1; l < ids.size(); ++l) {
        triples.push_back({ids[i], ids[j], ids[l]});
      }
    }
  }
  std::vector<double> shed(triples.size(), -1.0);
  parallel_for_index(triples.size(), workers, [&](std::uint64_t t) {
    const auto& tri = triples[t];
    for (int b : tri) {
      if (std::binary_search(singles.begin(), singles.end(), b)) return;
    }
    if (k2_keys.count({tri[0], tri[1]}) || k2_keys.count({tri[0], tri[2]}) ||
        k2_keys.count({tri[1], tri[2]})) {
      return;  // contains an N-2 malignancy: not minimal
    }
    const CascadeOutcome outcome = simulate(gcase, tri, sim);
    if (outcome.is_blackout) shed[t] = outcome.load_shed_mw;
  });

  std::vector<Malignancy> out;
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (shed[t] >= 0.0) out.push_back({triples[t], shed[t]});
  }
  return out;
}

bool verify_minimal(const GridCase& gcase, const Malignancy& m, const SimConfig& sim) {
  if (m.order() < 2) return false;
  if (!is_blackout_set(gcase, m.branches, sim)) return false;
  for (int k = 2; k < m.order(); ++k) {
    for (const auto& subset : combinations(m.branches, k)) {
      if (is_blackout_set(gcase, subset, sim)) return false;
    }
  }
  return true;
}

}  // namespace gridrisk
