#include <doctest.h>

#include <cmath>

#include "gridrisk/random_chemistry.hpp"
#include "gridrisk/risk.hpp"
#include "gridrisk/rng.hpp"
#include "support/case_builders.hpp"

using namespace gridrisk;

namespace {

CampaignLedger ledger_from(const std::vector<Malignancy>& ms, long trials_run) {
  CampaignLedger ledger;
  long trial = 0;
  for (const auto& m : ms) ledger.add(++trial, m);
  ledger.trials_run = trials_run;
  return ledger;
}

}  // namespace

TEST_CASE("risk_for_set arithmetic under independence") {
  GridCase g = testing::stress_case();
  g.outage_probability = 1e-4;
  const CorrelationModel model = spatial_correlation_model(g, 0.0, 300.0);
  const Malignancy omega{{201, 202}, 5000.0};
  const RiskTerm term = risk_for_set(g, omega, model);
  CHECK(std::abs(term.p_omega - 1e-8) <= 1e-10);
  CHECK(term.r_omega_mw == doctest::Approx(5e-5).epsilon(1e-4));
  CHECK(term.s_omega_mw == 5000.0);

  // Same set under correlation is strictly riskier (Slepian ordering).
  const CorrelationModel corr = spatial_correlation_model(g, 0.15, 300.0);
  const RiskTerm term2 = risk_for_set(g, omega, corr);
  CHECK(term2.r_omega_mw > term.r_omega_mw);

  const Malignancy zero{{201, 202}, 0.0};
  CHECK(risk_for_set(g, zero, model).r_omega_mw == 0.0);
}

TEST_CASE("estimate_risk scaling") {
  const GridCase g = testing::stress_case();
  const CorrelationModel model = spatial_correlation_model(g, 0.0, 300.0);
  const auto ledger = ledger_from({Malignancy{{201, 202}, 62.0}, Malignancy{{203, 204}, 64.0}},
                                  1000);

  SUBCASE("Eq-style scaling: |Omega|/|sampled| multiplies the sum") {
    std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(4.0)}};
    const RiskEstimate est = estimate_risk(g, ledger, model, policies);
    const auto& pk = est.per_k.at(2);
    CHECK(pk.scaling_low == doctest::Approx(2.0));
    CHECK(pk.r_low == doctest::Approx(2.0 * pk.sum_r_sampled));
    // Doubling the set size doubles the estimate.
    std::map<int, SetSizePolicy> twice{{2, SetSizePolicy::exact_count(8.0)}};
    const RiskEstimate est2 = estimate_risk(g, ledger, model, twice);
    CHECK(est2.total_low == doctest::Approx(2.0 * est.total_low));
  }
  SUBCASE("complete sample: scaling = 1") {
    std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(2.0)}};
    const RiskEstimate est = estimate_risk(g, ledger, model, policies);
    CHECK(est.per_k.at(2).scaling_low == doctest::Approx(1.0));
    CHECK(est.total_low == doctest::Approx(est.per_k.at(2).sum_r_sampled));
  }
  SUBCASE("missing policy") {
    std::map<int, SetSizePolicy> none;
    CHECK_THROWS_AS(estimate_risk(g, ledger, model, none), MissingSetSize);
  }
  SUBCASE("duplicates do not change the estimate") {
    auto dup = ledger_from({Malignancy{{201, 202}, 62.0}, Malignancy{{203, 204}, 64.0},
                            Malignancy{{201, 202}, 62.0}, Malignancy{{201, 202}, 62.0}},
                           1000);
    std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(4.0)}};
    CHECK(estimate_risk(g, dup, model, policies).total_low ==
          doctest::Approx(estimate_risk(g, ledger, model, policies).total_low));
  }
  SUBCASE("empty ledger") {
    CampaignLedger empty;
    std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact()}};
    CHECK_THROWS_AS(estimate_risk(g, empty, model, policies), EmptyLedger);
  }
}

TEST_CASE("exact policy requires a flat trailing accumulation window") {
  const GridCase g = testing::stress_case();
  const CorrelationModel model = spatial_correlation_model(g, 0.0, 300.0);
  std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact()}};

  CampaignLedger flat;
  flat.add(10, Malignancy{{201, 202}, 62.0});
  flat.add(700, Malignancy{{201, 202}, 62.0});  // repeat inside the window is fine
  flat.trials_run = 1000;
  CHECK_NOTHROW(estimate_risk(g, flat, model, policies));

  CampaignLedger growing;
  growing.add(10, Malignancy{{201, 202}, 62.0});
  growing.add(950, Malignancy{{203, 204}, 64.0});  // new unique set at 95%
  growing.trials_run = 1000;
  CHECK_THROWS_AS(estimate_risk(g, growing, model, policies), MissingSetSize);
}

TEST_CASE("bounds policy produces risk bounds and shares") {
  const GridCase g = testing::stress_case();
  const CorrelationModel model = spatial_correlation_model(g, 0.15, 300.0);
  const auto ledger = ledger_from({Malignancy{{201, 202}, 62.0},
                                   Malignancy{{401, 402, 501}, 92.0},
                                   Malignancy{{401, 402, 502}, 90.0}},
                                  1000);
  std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(5.0)},
                                        {3, SetSizePolicy::bounds(10.0, 24.0)}};
  const RiskEstimate est = estimate_risk(g, ledger, model, policies);
  CHECK(est.has_bounds);
  CHECK(est.per_k.at(3).scaling_low == doctest::Approx(5.0));
  CHECK(est.per_k.at(3).scaling_high == doctest::Approx(12.0));
  CHECK(est.total_low < est.total_high);
  CHECK(est.share_of_order_low(3) < est.share_of_order_high(3));
  CHECK(est.share_of_order_low(3) > 0.0);
  CHECK(est.share_of_order_high(3) < 1.0);

  SUBCASE("invalid bounds") {
    std::map<int, SetSizePolicy> bad{{2, SetSizePolicy::exact_count(5.0)},
                                     {3, SetSizePolicy::bounds(24.0, 10.0)}};
    CHECK_THROWS_AS(estimate_risk(g, ledger, model, bad), ValidationError);
  }
}

TEST_CASE("with full enumeration, estimate equals the direct sum") {
  const GridCase g = testing::stress_case();
  const CorrelationModel model = spatial_correlation_model(g, 0.10, 200.0);
  const auto k2 = brute_force_k2(g, SimConfig{}, 2);
  const auto k3 = brute_force_k3(g, SimConfig{}, 2);

  std::vector<Malignancy> all(k2);
  all.insert(all.end(), k3.begin(), k3.end());
  const auto ledger = ledger_from(all, 10000);

  double direct = 0.0;
  double sum_s = 0.0;
  for (const auto& m : all) {
    direct += risk_for_set(g, m, model).r_omega_mw;
    sum_s += m.blackout_size_mw;
  }
  std::map<int, SetSizePolicy> policies{
      {2, SetSizePolicy::exact_count(static_cast<double>(k2.size()))},
      {3, SetSizePolicy::exact_count(static_cast<double>(k3.size()))}};
  const RiskEstimate est = estimate_risk(g, ledger, model, policies);
  CHECK(std::abs(est.total_low - direct) <= 1e-8 * sum_s);
  CHECK(est.total_low == doctest::Approx(est.total_high));
}

TEST_CASE("risk grid") {
  const GridCase g = testing::stress_case();
  const auto ledger = ledger_from({Malignancy{{201, 202}, 62.0}}, 1000);
  std::map<int, SetSizePolicy> policies{{2, SetSizePolicy::exact_count(1.0)}};

  SUBCASE("single uncorrelated cell") {
    const auto rows = risk_grid(g, ledger, {0.0}, {0.0}, policies);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].rho0 == 0.0);
    CHECK(rows[0].length_km == 0.0);
    CHECK(rows[0].estimate.total_low > 0.0);
  }
  SUBCASE("grid shape and monotonicity along rho0 and L") {
    const auto rows =
        risk_grid(g, ledger, {0.0, 0.05, 0.10, 0.15}, {0.0, 100.0, 200.0, 300.0}, policies);
    REQUIRE(rows.size() == 16);
    // Fixed L = 300: strictly increasing in rho0.
    double prev = -1.0;
    for (std::size_t i = 3; i < rows.size(); i += 4) {
      CHECK(rows[i].estimate.total_low > prev);
      prev = rows[i].estimate.total_low;
    }
    // Fixed rho0 = 0.15: nondecreasing in L.
    prev = -1.0;
    for (std::size_t i = 12; i < 16; ++i) {
      CHECK(rows[i].estimate.total_low >= prev);
      prev = rows[i].estimate.total_low;
    }
  }
}

TEST_CASE("load sweep") {
  const GridCase g = testing::stress_case();
  const CorrelationModel model = spatial_correlation_model(g, 0.1, 300.0);
  LoadSweepConfig config;
  config.scheme = RCScheme::from_sizes({20, 14, 10, 7, 5});
  config.trials_per_level = 60;
  config.seed = 31u;
  config.workers = 2;

  SUBCASE("unsorted factors come back sorted; rows complete") {
    const auto rows = load_sweep(g, {1.05, 0.95, 1.0}, model, config);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].factor == doctest::Approx(0.95));
    CHECK(rows[1].factor == doctest::Approx(1.0));
    CHECK(rows[2].factor == doctest::Approx(1.05));
  }
  SUBCASE("factor 1.0 equals a direct estimate on the base case") {
    const auto rows = load_sweep(g, {1.0}, model, config);
    REQUIRE(rows.size() == 1);
    // Reproduce the sweep's internal campaign: level 0 uses a derived seed.
    CampaignConfig cc;
    cc.scheme = config.scheme;
    cc.n_trials = config.trials_per_level;
    cc.seed = derive_seed(config.seed, 0);
    cc.workers = config.workers;
    const CampaignLedger ledger = run_campaign(scale_load(g, 1.0), cc);
    CampaignLedger k2_only;
    for (const auto& d : ledger.discoveries()) {
      if (d.malignancy.order() == 2) k2_only.add(d.trial, d.malignancy);
    }
    k2_only.trials_run = ledger.trials_run;
    std::map<int, SetSizePolicy> policies{
        {2, SetSizePolicy::exact_count(static_cast<double>(k2_only.unique_count(2)))}};
    const RiskEstimate direct = estimate_risk(g, k2_only, model, policies);
    CHECK(rows[0].estimate.total_low == doctest::Approx(direct.total_low).epsilon(1e-12));
  }
  SUBCASE("infeasible factor propagates") {
    CHECK_THROWS_AS(load_sweep(g, {10.0}, model, config), InfeasibleDispatch);
  }
  SUBCASE("missing trials config rejected") {
    LoadSweepConfig bad = config;
    bad.trials_per_level = 0;
    CHECK_THROWS_AS(load_sweep(g, {1.0}, model, bad), ValidationError);
  }
}
