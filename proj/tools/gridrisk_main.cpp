#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gridrisk/case_io.hpp"
#include "gridrisk/copula.hpp"
#include "gridrisk/geometry.hpp"
#include "gridrisk/parallel.hpp"
#include "gridrisk/random_chemistry.hpp"
#include "gridrisk/risk.hpp"
#include "gridrisk/rng.hpp"
#include "gridrisk/set_estimation.hpp"
#include "manifest.hpp"

using namespace gridrisk;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int env_workers() {
  if (const char* w = std::getenv("GRIDRISK_WORKERS")) {
    const int n = std::atoi(w);
    if (n > 0) return n;
  }
  return default_worker_count();
}

GridCase load_with_warnings(const std::string& path, const std::string& coords) {
  const auto result =
      coords.empty() ? load_case(path) : load_case(path, std::make_optional(coords));
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  return result.gcase;
}

RCScheme make_scheme(const std::string& text, int n_branches, int max_subsamples) {
  RCScheme scheme = text == "auto" ? RCScheme::auto_for(n_branches)
                                   : RCScheme::from_sizes(parse_int_list(text));
  scheme.max_subsamples = max_subsamples;
  scheme.validate(n_branches);
  return scheme;
}

std::ofstream open_csv(const std::string& path, const std::string& manifest_name,
                       const std::string& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "# manifest: " << manifest_name << "\n" << header << "\n";
  return out;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- subcommand payloads -------------------------------------------------

struct SimulateArgs {
  std::string case_path, coords, outages, out;
  double threshold = 0.05;
};

int cmd_simulate(const SimulateArgs& args) {
  cli::RunManifest manifest;
  manifest.start("simulate", args.case_path);
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);
  SimConfig config;
  config.blackout_threshold = args.threshold;
  const std::vector<int> outages = parse_int_list(args.outages);
  manifest.config = {{"outages", outages}, {"threshold", args.threshold}};

  const CascadeOutcome outcome = simulate(gcase, outages, config);
  json j;
  j["load_shed_mw"] = outcome.load_shed_mw;
  j["shed_fraction"] = outcome.shed_fraction;
  j["is_blackout"] = outcome.is_blackout;
  j["trip_sequence"] = outcome.trip_sequence;
  j["iterations"] = outcome.iterations;
  j["converged"] = outcome.converged;
  j["initiating_outages"] = outages;

  if (args.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    manifest.outputs.push_back(args.out);
    const std::string mpath = manifest.write(args.out);
    j["manifest"] = mpath;
    std::ofstream out(args.out, std::ios::binary);
    if (!out) throw IoError("cannot write '" + args.out + "'");
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

struct CampaignArgs {
  std::string case_path, coords, scheme = "auto", out;
  long trials = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  long checkpoint_every = 1000;
  int max_subsamples = 20;
  double threshold = 0.05;
};

int cmd_rc_campaign(const CampaignArgs& args) {
  cli::RunManifest manifest;
  manifest.start("rc-campaign", args.case_path);
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);

  CampaignConfig config;
  config.scheme = make_scheme(args.scheme, gcase.n_branches(), args.max_subsamples);
  config.sim.blackout_threshold = args.threshold;
  config.n_trials = args.trials;
  config.seed = args.seed;
  config.workers = args.workers > 0 ? args.workers : env_workers();
  config.checkpoint_every = args.checkpoint_every;
  config.checkpoint_path = args.out;

  manifest.seed = args.seed;
  manifest.config = {{"trials", args.trials},
                     {"scheme", config.scheme.sizes},
                     {"max_subsamples", config.scheme.max_subsamples},
                     {"threshold", args.threshold},
                     {"checkpoint_every", args.checkpoint_every}};
  manifest.outputs.push_back(args.out);

  const CampaignLedger ledger = run_campaign(gcase, config);
  ledger.save(args.out);
  manifest.write(args.out);

  std::cerr << "trials " << ledger.trials_run << ", aborted " << ledger.trials_aborted
            << ", discoveries " << ledger.discoveries().size() << ", unique k2 "
            << ledger.unique_count(2) << ", unique k3 " << ledger.unique_count(3) << "\n";
  return kExitOk;
}

struct EstimateSizeArgs {
  std::string ledger_path, case_path, coords, out;
  int k = 3;
  int top_m = 10;
  int workers = 0;
  double stability_window = 0.10;
  long stability_min = 1000;
};

int cmd_estimate_size(const EstimateSizeArgs& args) {
  if (args.k != 3) {
    throw ValidationError("set-size estimation is implemented for k = 3 only");
  }
  cli::RunManifest manifest;
  manifest.start("estimate-size", args.case_path);
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);
  const CampaignLedger ledger = CampaignLedger::load(args.ledger_path);

  RcpConfig config;
  config.workers = args.workers > 0 ? args.workers : env_workers();
  config.stability_window_fraction = args.stability_window;
  config.stability_min_trials = args.stability_min;

  manifest.config = {{"ledger", args.ledger_path},
                     {"k", args.k},
                     {"top_m", args.top_m},
                     {"stability_window", args.stability_window}};

  const SetSizeBounds bounds = rcp_estimate(gcase, ledger, config);
  const auto rows = undersampling_report(gcase, ledger, args.top_m, config);

  const std::string base = args.out.empty() ? "set_size" : args.out;
  manifest.outputs.push_back(base + ".json");
  manifest.outputs.push_back(base + "_undersampling.csv");
  const std::string mpath = manifest.write(base);

  json j;
  j["chao_lower"] = bounds.chao_lower;
  j["rcp_upper"] = bounds.rcp_upper;
  j["n1"] = bounds.n1;
  j["n2"] = bounds.n2;
  j["pair_max"] = {bounds.pair_max.first, bounds.pair_max.second};
  j["q_proportion"] = bounds.q_proportion;
  j["unique_found"] = bounds.unique_found;
  j["manifest"] = mpath;
  {
    std::ofstream out(base + ".json", std::ios::binary);
    out << j.dump(2) << "\n";
  }
  {
    auto csv = open_csv(base + "_undersampling.csv", mpath,
                        "branch_a,branch_b,rc_found,true_count,proportion");
    for (const auto& row : rows) {
      csv << row.pair.first << "," << row.pair.second << "," << row.rc_found << ","
          << row.true_count << "," << row.proportion << "\n";
    }
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

struct JointpArgs {
  std::string case_path, coords, branches;
  double rho0 = 0.0;
  double length = 0.0;
};

int cmd_jointp(const JointpArgs& args) {
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);
  const std::vector<int> ids = parse_int_list(args.branches);
  const CorrelationModel model = spatial_correlation_model(gcase, args.rho0, args.length);
  const JointOutageProbability joint = contingency_probability_detail(gcase, ids, model);
  std::cout << "joint_probability " << std::scientific << joint.value << "\n"
            << "abs_error_estimate " << joint.abs_error_estimate << "\n"
            << "tolerance_met " << (joint.tolerance_met ? "true" : "false") << "\n";
  return kExitOk;
}

struct RiskArgs {
  std::string case_path, coords, ledger_path, out = "risk.csv";
  std::string rho0_list = "0,0.05,0.10,0.15";
  std::string length_list = "0,100,200,300";
  std::string k3_bounds = "chao,rcp";
  std::string k2_policy = "exact";
  int workers = 0;
  // Load-sweep mode.
  std::string load_factors;
  long trials_per_level = 0;
  std::uint64_t seed = 0;
  std::string scheme = "auto";
};

int cmd_risk(const RiskArgs& args) {
  cli::RunManifest manifest;
  manifest.start("risk", args.case_path);
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);

  if (!args.load_factors.empty()) {
    // risk-vs-load sweep: fresh campaign per level, N-2 risk.
    LoadSweepConfig config;
    config.scheme = make_scheme(args.scheme, gcase.n_branches(), 20);
    config.trials_per_level = args.trials_per_level;
    config.seed = args.seed;
    config.workers = args.workers > 0 ? args.workers : env_workers();
    const auto rho0s = parse_double_list(args.rho0_list);
    const auto lengths = parse_double_list(args.length_list);
    if (rho0s.size() != 1 || lengths.size() != 1) {
      throw ValidationError("load sweep expects a single --rho0 and a single --L");
    }
    const CorrelationModel model = spatial_correlation_model(gcase, rho0s[0], lengths[0]);
    manifest.seed = args.seed;
    manifest.config = {{"load_factors", args.load_factors},
                       {"trials_per_level", args.trials_per_level},
                       {"rho0", rho0s[0]},
                       {"L", lengths[0]}};
    manifest.outputs.push_back(args.out);
    const auto rows = load_sweep(gcase, parse_double_list(args.load_factors), model, config);
    const std::string mpath = manifest.write(args.out);
    auto csv = open_csv(args.out, mpath, "factor,r2,unique_k2,trials_aborted");
    for (const auto& row : rows) {
      csv << row.factor << "," << row.estimate.total_low << "," << row.unique_k2 << ","
          << row.trials_aborted << "\n";
    }
    return kExitOk;
  }

  if (args.ledger_path.empty()) {
    throw ValidationError("risk requires --ledger (or --load-factors for a sweep)");
  }
  const CampaignLedger ledger = CampaignLedger::load(args.ledger_path);

  std::map<int, SetSizePolicy> policies;
  if (args.k2_policy == "exact") {
    policies[2] = SetSizePolicy::exact();
  } else if (args.k2_policy.rfind("count:", 0) == 0) {
    policies[2] = SetSizePolicy::exact_count(std::stod(args.k2_policy.substr(6)));
  } else {
    throw ValidationError("--k2-policy must be 'exact' or 'count:<N>'");
  }

  const bool has_k3 = ledger.unique_count(3) > 0;
  if (has_k3) {
    if (args.k3_bounds == "chao,rcp" || args.k3_bounds == "rcp,chao") {
      RcpConfig rcp;
      rcp.workers = args.workers > 0 ? args.workers : env_workers();
      const SetSizeBounds bounds = rcp_estimate(gcase, ledger, rcp);
      policies[3] = SetSizePolicy::bounds(bounds.chao_lower, bounds.rcp_upper);
      std::cerr << "k3 bounds: chao " << bounds.chao_lower << ", rcp " << bounds.rcp_upper
                << " (pair_max {" << bounds.pair_max.first << "," << bounds.pair_max.second
                << "}, q " << bounds.q_proportion << ")\n";
    } else if (args.k3_bounds.rfind("count:", 0) == 0) {
      policies[3] = SetSizePolicy::exact_count(std::stod(args.k3_bounds.substr(6)));
    } else if (args.k3_bounds.rfind("bounds:", 0) == 0) {
      const auto vals = parse_double_list(args.k3_bounds.substr(7));
      if (vals.size() != 2) throw ValidationError("--k3-bounds bounds:<lo>,<hi>");
      policies[3] = SetSizePolicy::bounds(vals[0], vals[1]);
    } else {
      throw ValidationError("--k3-bounds must be 'chao,rcp', 'count:<N>' or 'bounds:<lo>,<hi>'");
    }
  }

  manifest.config = {{"ledger", args.ledger_path},
                     {"rho0", args.rho0_list},
                     {"L", args.length_list},
                     {"k2_policy", args.k2_policy},
                     {"k3_bounds", args.k3_bounds}};
  manifest.outputs.push_back(args.out);

  ProbabilityCache cache;
  const auto rows = risk_grid(gcase, ledger, parse_double_list(args.rho0_list),
                              parse_double_list(args.length_list), policies, RiskOptions{},
                              &cache);
  const std::string mpath = manifest.write(args.out);
  auto csv = open_csv(args.out, mpath,
                      "rho0,L,r2,r3_low,r3_high,total_low,total_high,share3_low,share3_high");
  for (const auto& row : rows) {
    const auto& est = row.estimate;
    const double r2 = est.per_k.count(2) ? est.per_k.at(2).r_low : 0.0;
    const double r3_low = est.per_k.count(3) ? est.per_k.at(3).r_low : 0.0;
    const double r3_high = est.per_k.count(3) ? est.per_k.at(3).r_high : 0.0;
    csv << row.rho0 << "," << row.length_km << "," << r2 << "," << r3_low << "," << r3_high
        << "," << est.total_low << "," << est.total_high << "," << est.share_of_order_low(3)
        << "," << est.share_of_order_high(3) << "\n";
  }
  return kExitOk;
}

struct AnalyzeArgs {
  std::string kind, ledger_path, case_path, coords, out = "analysis";
  long benign_samples = 1000000;
  std::uint64_t seed = 1;
};

int cmd_analyze(const AnalyzeArgs& args) {
  if (args.kind != "accumulation" && args.kind != "pair-freq" && args.kind != "distributions" &&
      args.kind != "distances") {
    throw ValidationError("unknown analyze kind '" + args.kind +
                          "' (accumulation | pair-freq | distributions | distances)");
  }
  cli::RunManifest manifest;
  manifest.start("analyze " + args.kind, args.case_path);
  manifest.seed = args.seed;
  const GridCase gcase = load_with_warnings(args.case_path, args.coords);
  const CampaignLedger ledger = CampaignLedger::load(args.ledger_path);
  if (ledger.discoveries().empty()) throw EmptyLedger("ledger has no discoveries");
  manifest.config = {{"ledger", args.ledger_path}, {"kind", args.kind}};

  const std::string base = args.out;
  if (args.kind == "accumulation") {
    const auto curve = accumulation_curve(ledger);
    manifest.outputs.push_back(base + "_accumulation.csv");
    const std::string mpath = manifest.write(base);
    auto csv = open_csv(base + "_accumulation.csv", mpath, "discoveries,unique");
    for (const auto& [total, unique] : curve) csv << total << "," << unique << "\n";
    // Per-order curves for the orders present.
    for (int k = 2; k <= 5; ++k) {
      CampaignLedger filtered;
      for (const auto& d : ledger.discoveries()) {
        if (d.malignancy.order() == k) filtered.add(d.trial, d.malignancy);
      }
      if (filtered.discoveries().empty()) continue;
      auto kcsv = open_csv(base + "_accumulation_k" + std::to_string(k) + ".csv", mpath,
                           "discoveries,unique");
      for (const auto& [total, unique] : accumulation_curve(filtered)) {
        kcsv << total << "," << unique << "\n";
      }
    }
    return kExitOk;
  }

  if (args.kind == "pair-freq") {
    const PairFrequency pf = pair_frequencies(ledger);
    manifest.outputs.push_back(base + "_pair_freq.csv");
    const std::string mpath = manifest.write(base);
    auto csv = open_csv(base + "_pair_freq.csv", mpath, "branch_a,branch_b,count");
    for (const auto& [pair, count] : pf.top(-1)) {
      csv << pair.first << "," << pair.second << "," << count << "\n";
    }
    return kExitOk;
  }

  if (args.kind == "distributions") {
    manifest.outputs.push_back(base + "_blackout_sizes.csv");
    manifest.outputs.push_back(base + "_blackout_sizes_summary.csv");
    const std::string mpath = manifest.write(base);
    auto csv = open_csv(base + "_blackout_sizes.csv", mpath, "k,shed_mw");
    auto summary = open_csv(base + "_blackout_sizes_summary.csv", mpath, "k,count,median_mw");
    for (int k = 2; k <= 5; ++k) {
      std::vector<double> sizes;
      for (const auto& m : ledger.unique_of_order(k)) sizes.push_back(m.blackout_size_mw);
      if (sizes.empty()) {
        std::cerr << "warning: no N-" << k << " malignancies in the ledger\n";
        continue;
      }
      for (double s : sizes) csv << k << "," << s << "\n";
      summary << k << "," << sizes.size() << "," << median_of(sizes) << "\n";
    }
    return kExitOk;
  }

  if (args.kind == "distances") {
    manifest.outputs.push_back(base + "_malignancy_distances.csv");
    manifest.outputs.push_back(base + "_benign_distances.csv");
    manifest.outputs.push_back(base + "_distances_summary.csv");
    const std::string mpath = manifest.write(base);
    auto csv = open_csv(base + "_malignancy_distances.csv", mpath, "k,distance_km");
    auto summary = open_csv(base + "_distances_summary.csv", mpath, "group,count,median_km");
    for (int k = 2; k <= 5; ++k) {
      std::vector<double> ds;
      for (const auto& m : ledger.unique_of_order(k)) {
        for (std::size_t i = 0; i < m.branches.size(); ++i) {
          for (std::size_t j = i + 1; j < m.branches.size(); ++j) {
            ds.push_back(branch_distance(branch_segment(gcase, m.branches[i]),
                                         branch_segment(gcase, m.branches[j])));
          }
        }
      }
      if (ds.empty()) {
        std::cerr << "warning: no N-" << k << " malignancies in the ledger\n";
        continue;
      }
      for (double d : ds) csv << k << "," << d << "\n";
      summary << "k" << k << "," << ds.size() << "," << median_of(ds) << "\n";
    }

    // Benign baseline: uniform random pairs that are not k=2 malignancies.
    std::set<std::vector<int>> malignant;
    for (const auto& m : ledger.unique_of_order(2)) malignant.insert(m.branches);
    const auto ids = gcase.branch_ids();
    Rng rng(args.seed);
    std::vector<double> benign;
    benign.reserve(static_cast<std::size_t>(args.benign_samples));
    auto bcsv = open_csv(base + "_benign_distances.csv", mpath, "distance_km");
    while (benign.size() < static_cast<std::size_t>(args.benign_samples)) {
      const int a = ids[static_cast<std::size_t>(rng.next_below(ids.size()))];
      int b = a;
      while (b == a) b = ids[static_cast<std::size_t>(rng.next_below(ids.size()))];
      std::vector<int> key{std::min(a, b), std::max(a, b)};
      if (malignant.count(key)) continue;  // resample: baseline is benign pairs only
      const double d =
          branch_distance(branch_segment(gcase, a), branch_segment(gcase, b));
      benign.push_back(d);
      bcsv << d << "\n";
    }
    summary << "benign," << benign.size() << "," << median_of(benign) << "\n";
    return kExitOk;
  }

  return kExitUsage;  // unreachable: kind validated above
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cascading-blackout risk estimation via Random Chemistry sampling"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Run one cascade simulation");
  sim->add_option("--case", sim_args.case_path, "Case file (.json or MATPOWER .m)")->required();
  sim->add_option("--coords", sim_args.coords, "Coordinate CSV (bus_id,x_km,y_km)");
  sim->add_option("--outages", sim_args.outages, "Comma-separated branch ids")->required();
  sim->add_option("--threshold", sim_args.threshold, "Blackout shed fraction threshold");
  sim->add_option("--out", sim_args.out, "Write the outcome JSON here instead of stdout");

  CampaignArgs camp_args;
  auto* camp = app.add_subcommand("rc-campaign", "Run a Random Chemistry campaign");
  camp->add_option("--case", camp_args.case_path)->required();
  camp->add_option("--coords", camp_args.coords);
  camp->add_option("--trials", camp_args.trials, "Number of RC trials")->required();
  camp->add_option("--scheme", camp_args.scheme, "Comma list or 'auto'");
  camp->add_option("--seed", camp_args.seed, "Campaign seed");
  camp->add_option("--workers", camp_args.workers, "Worker threads (default: GRIDRISK_WORKERS)");
  camp->add_option("--checkpoint-every", camp_args.checkpoint_every);
  camp->add_option("--max-subsamples", camp_args.max_subsamples);
  camp->add_option("--threshold", camp_args.threshold);
  camp->add_option("--out", camp_args.out, "Ledger path (JSON lines)")->required();

  EstimateSizeArgs est_args;
  auto* est = app.add_subcommand("estimate-size", "Bound |Omega_3| from a campaign ledger");
  est->add_option("--ledger", est_args.ledger_path)->required();
  est->add_option("--case", est_args.case_path)->required();
  est->add_option("--coords", est_args.coords);
  est->add_option("--k", est_args.k);
  est->add_option("--top-m", est_args.top_m);
  est->add_option("--workers", est_args.workers);
  est->add_option("--stability-window", est_args.stability_window);
  est->add_option("--stability-min-trials", est_args.stability_min);
  est->add_option("--out", est_args.out, "Output basename");

  JointpArgs joint_args;
  auto* joint = app.add_subcommand("jointp", "Joint outage probability of a branch set");
  joint->add_option("--case", joint_args.case_path)->required();
  joint->add_option("--coords", joint_args.coords);
  joint->add_option("--branches", joint_args.branches, "2 or 3 comma-separated ids")->required();
  joint->add_option("--rho0", joint_args.rho0)->required();
  joint->add_option("--L", joint_args.length)->required();

  RiskArgs risk_args;
  auto* risk = app.add_subcommand("risk", "Risk grid over (rho0, L), or a load sweep");
  risk->add_option("--case", risk_args.case_path)->required();
  risk->add_option("--coords", risk_args.coords);
  risk->add_option("--ledger", risk_args.ledger_path);
  risk->add_option("--rho0", risk_args.rho0_list, "Comma list");
  risk->add_option("--L", risk_args.length_list, "Comma list (km)");
  risk->add_option("--k3-bounds", risk_args.k3_bounds, "chao,rcp | count:<N> | bounds:<lo>,<hi>");
  risk->add_option("--k2-policy", risk_args.k2_policy, "exact | count:<N>");
  risk->add_option("--workers", risk_args.workers);
  risk->add_option("--out", risk_args.out);
  risk->add_option("--load-factors", risk_args.load_factors, "Sweep mode: comma list of factors");
  risk->add_option("--trials-per-level", risk_args.trials_per_level);
  risk->add_option("--seed", risk_args.seed);
  risk->add_option("--scheme", risk_args.scheme);

  AnalyzeArgs an_args;
  auto* an = app.add_subcommand("analyze", "Emit figure-reproduction datasets as CSV");
  an->add_option("kind", an_args.kind, "accumulation | pair-freq | distributions | distances")
      ->required();
  an->add_option("--ledger", an_args.ledger_path)->required();
  an->add_option("--case", an_args.case_path)->required();
  an->add_option("--coords", an_args.coords);
  an->add_option("--out", an_args.out, "Output basename");
  an->add_option("--benign-samples", an_args.benign_samples);
  an->add_option("--seed", an_args.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_args);
    if (camp->parsed()) return cmd_rc_campaign(camp_args);
    if (est->parsed()) return cmd_estimate_size(est_args);
    if (joint->parsed()) return cmd_jointp(joint_args);
    if (risk->parsed()) return cmd_risk(risk_args);
    if (an->parsed()) return cmd_analyze(an_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MissingSetSize& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
