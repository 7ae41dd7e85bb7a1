#include <benchmark/benchmark.h>

#include "gridrisk/cascade.hpp"
#include "gridrisk/copula.hpp"
#include "gridrisk/geometry.hpp"
#include "gridrisk/mvn.hpp"
#include "gridrisk/power_flow.hpp"
#include "gridrisk/random_chemistry.hpp"
#include "support/case_builders.hpp"

using namespace gridrisk;

namespace {

const GridCase& stress() {
  static const GridCase g = testing::stress_case();
  return g;
}

std::vector<double> balanced_injections(const GridCase& g) {
  std::vector<double> inj(g.buses.size(), 0.0);
  for (std::size_t i = 0; i < g.buses.size(); ++i) inj[i] = -g.buses[i].load_mw;
  for (const auto& gen : g.generators) {
    inj[static_cast<std::size_t>(g.bus_index(gen.bus))] += gen.p_mw;
  }
  return inj;
}

void BM_SolveDc(benchmark::State& state) {
  const GridCase& g = stress();
  const auto part = find_islands(g, {});
  const auto inj = balanced_injections(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_dc(g, part, inj));
  }
}
BENCHMARK(BM_SolveDc);

void BM_SimulateBenign(benchmark::State& state) {
  const GridCase& g = stress();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(g, {101}));
  }
}
BENCHMARK(BM_SimulateBenign);

void BM_SimulateBlackout(benchmark::State& state) {
  const GridCase& g = stress();
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(g, {201, 202}));
  }
}
BENCHMARK(BM_SimulateBlackout);

void BM_RcTrial(benchmark::State& state) {
  const GridCase& g = stress();
  const RCScheme scheme = RCScheme::from_sizes({20, 14, 10, 7, 5});
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rc_trial(g, scheme, SimConfig{}, seed++));
  }
}
BENCHMARK(BM_RcTrial);

void BM_BivariateNormalCdf(benchmark::State& state) {
  double h = -3.7, k = -3.5, r = 0.12;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bivariate_normal_cdf(h, k, r));
    r = r < 0.9 ? r + 1e-6 : 0.12;
  }
}
BENCHMARK(BM_BivariateNormalCdf);

void BM_TrivariateOrthant(benchmark::State& state) {
  std::vector<Marginal> ms(3, calibrate_marginal(1.05e-4));
  std::vector<double> corr = {1.0, 0.12, 0.08, 0.12, 1.0, 0.10, 0.08, 0.10, 1.0};
  const auto cov = build_covariance_from_corr(ms, corr);
  for (auto _ : state) {
    benchmark::DoNotOptimize(joint_outage_probability(ms, cov));
  }
}
BENCHMARK(BM_TrivariateOrthant);

void BM_DistanceMatrix(benchmark::State& state) {
  const GridCase& g = stress();
  const auto ids = g.branch_ids();
  for (auto _ : state) {
    benchmark::DoNotOptimize(DistanceMatrix(g, ids));
  }
}
BENCHMARK(BM_DistanceMatrix);

}  // namespace

BENCHMARK_MAIN();
