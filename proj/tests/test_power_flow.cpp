#include <doctest.h>

#include <cmath>

#include "gridrisk/power_flow.hpp"
#include "gridrisk/rng.hpp"
#include "support/case_builders.hpp"
#include "support/oracles.hpp"

using namespace gridrisk;

namespace {

std::vector<double> balanced_injections(const GridCase& g) {
  std::vector<double> inj(g.buses.size(), 0.0);
  for (std::size_t i = 0; i < g.buses.size(); ++i) inj[i] = -g.buses[i].load_mw;
  for (const auto& gen : g.generators) {
    inj[static_cast<std::size_t>(g.bus_index(gen.bus))] += gen.p_mw;
  }
  return inj;
}

// Random connected case for oracle comparisons: a spanning tree plus extra
// chords, random reactances and injections balanced at the slack.
GridCase random_case(Rng& rng, int n_buses) {
  GridCase g;
  g.base_mva = 100.0;
  for (int i = 1; i <= n_buses; ++i) {
    g.buses.push_back({i, rng.next_double() * 500.0, rng.next_double() * 500.0, 0.0, true});
  }
  int id = 1;
  for (int i = 2; i <= n_buses; ++i) {
    const int parent = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i - 1)));
    Branch br;
    br.id = id++;
    br.from_bus = parent;
    br.to_bus = i;
    br.reactance_pu = 0.02 + rng.next_double() * 0.2;
    br.rate_a_mw = 1000.0;
    g.branches.push_back(br);
  }
  const int extra = n_buses / 2;
  for (int e = 0; e < extra; ++e) {
    const int a = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_buses)));
    const int b = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_buses)));
    if (a == b) continue;
    Branch br;
    br.id = id++;
    br.from_bus = a;
    br.to_bus = b;
    br.reactance_pu = 0.02 + rng.next_double() * 0.2;
    br.rate_a_mw = 1000.0;
    g.branches.push_back(br);
  }
  g.generators.push_back({1, 1, 0.0, 10000.0, 0.0});
  synthesize_ratings(g);
  g.rebuild_index();
  return g;
}

std::vector<double> random_balanced_injections(Rng& rng, const GridCase& g) {
  std::vector<double> inj(g.buses.size(), 0.0);
  double sum = 0.0;
  for (std::size_t i = 1; i < g.buses.size(); ++i) {
    inj[i] = (rng.next_double() - 0.5) * 200.0;
    sum += inj[i];
  }
  inj[0] = -sum;
  return inj;
}

}  // namespace

TEST_CASE("find_islands") {
  const GridCase g = testing::triangle3();
  SUBCASE("intact triangle") {
    const auto part = find_islands(g, {});
    REQUIRE(part.islands.size() == 1);
    CHECK(part.islands[0].bus_ids == std::vector<int>{1, 2, 3});
    CHECK(part.islands[0].branch_ids == std::vector<int>{1, 2, 3});
    CHECK(part.islands[0].slack_bus_id == 1);  // the only generator bus
  }
  SUBCASE("two branches out") {
    const auto part = find_islands(g, {1, 2});
    REQUIRE(part.islands.size() == 2);
    CHECK(part.islands[0].bus_ids == std::vector<int>{1});
    CHECK(part.islands[1].bus_ids == std::vector<int>{2, 3});
  }
  SUBCASE("all branches out") {
    const auto part = find_islands(g, {1, 2, 3});
    REQUIRE(part.islands.size() == 3);
    for (const auto& isl : part.islands) CHECK(isl.bus_ids.size() == 1);
  }
  SUBCASE("slack prefers the largest p_max") {
    GridCase two = g;
    two.generators.push_back({2, 3, 0.0, 500.0, 0.0});
    two.rebuild_index();
    const auto part = find_islands(two, {});
    CHECK(part.islands[0].slack_bus_id == 3);
  }
}

TEST_CASE("triangle analytic flows (2/3, 1/3, 1/3)") {
  const GridCase g = testing::triangle3();
  std::vector<double> inj = {100.0, -100.0, 0.0};  // +1, -1, 0 pu on base 100
  const auto part = find_islands(g, {});
  const auto sol = solve_dc(g, part, inj);
  REQUIRE(sol.converged);
  CHECK(std::abs(sol.flow_mw[0] / 100.0 - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(sol.flow_mw[1] / 100.0 - 1.0 / 3.0) <= 1e-12);
  // Branch 3 is 3->2, carrying +1/3 toward bus 2.
  CHECK(std::abs(sol.flow_mw[2] / 100.0 - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("zero injections give zero flows; single bus island is vacuous") {
  const GridCase g = testing::triangle3();
  std::vector<double> inj(3, 0.0);
  const auto sol = solve_dc(g, find_islands(g, {}), inj);
  for (double f : sol.flow_mw) CHECK(f == 0.0);

  const auto part = find_islands(g, {1, 2});  // bus 1 isolated
  std::vector<double> inj2 = {0.0, -50.0, 50.0};
  const auto sol2 = solve_dc(g, part, inj2);
  CHECK(sol2.converged);
  CHECK(sol2.flow_mw[0] == 0.0);
  CHECK(sol2.flow_mw[1] == 0.0);
  CHECK(std::abs(sol2.flow_mw[2] - 50.0) <= 1e-9);  // branch 3 is 3->2
}

TEST_CASE("unbalanced injections are rejected") {
  const GridCase g = testing::triangle3();
  std::vector<double> inj = {100.0, -50.0, 0.0};
  CHECK_THROWS_AS(solve_dc(g, find_islands(g, {}), inj), ValidationError);
}

TEST_CASE("scaling linearity") {
  const GridCase g = testing::stress_case();
  const auto part = find_islands(g, {});
  const auto inj = balanced_injections(g);
  std::vector<double> inj2(inj);
  for (auto& v : inj2) v *= 2.0;
  const auto a = solve_dc(g, part, inj);
  const auto b = solve_dc(g, part, inj2);
  for (std::size_t i = 0; i < a.flow_mw.size(); ++i) {
    CHECK(std::abs(b.flow_mw[i] - 2.0 * a.flow_mw[i]) <=
          1e-9 * std::max(1.0, std::abs(a.flow_mw[i])));
  }
}

TEST_CASE("permutation invariance") {
  GridCase g = testing::triangle3();
  // Relabel buses 1,2,3 -> 30,10,20 and reorder the vectors.
  GridCase p = g;
  auto relabel = [](int id) { return id == 1 ? 30 : id == 2 ? 10 : 20; };
  for (auto& b : p.buses) b.id = relabel(b.id);
  for (auto& br : p.branches) {
    br.from_bus = relabel(br.from_bus);
    br.to_bus = relabel(br.to_bus);
  }
  for (auto& gen : p.generators) gen.bus = relabel(gen.bus);
  std::swap(p.buses[0], p.buses[1]);
  p.rebuild_index();

  std::vector<double> inj = {100.0, -100.0, 0.0};
  std::vector<double> inj_p = {-100.0, 100.0, 0.0};  // buses reordered: [10(=old2), 30(=old1), 20(=old3)]
  const auto sol = solve_dc(g, find_islands(g, {}), inj);
  const auto sol_p = solve_dc(p, find_islands(p, {}), inj_p);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(sol.flow_mw[i] - sol_p.flow_mw[i]) <= 1e-9);
  }
}

TEST_CASE("dense oracle agreement on bundled and random cases") {
  SUBCASE("bundled cases") {
    for (const GridCase& g : {testing::triangle3(), testing::rc10(), testing::radial4(),
                              testing::stress_case()}) {
      const auto inj = balanced_injections(g);
      const auto sol = solve_dc(g, find_islands(g, {}), inj);
      const auto oracle = testing::dense_dc_flows(g, {}, inj);
      for (std::size_t i = 0; i < sol.flow_mw.size(); ++i) {
        CHECK(std::abs(sol.flow_mw[i] - oracle[i]) / g.base_mva <= 1e-8);
      }
    }
  }
  SUBCASE("random cases up to 50 buses") {
    Rng rng(20260809u);
    for (int rep = 0; rep < 12; ++rep) {
      const int n = 5 + static_cast<int>(rng.next_below(46));
      const GridCase g = random_case(rng, n);
      const auto inj = random_balanced_injections(rng, g);
      const auto sol = solve_dc(g, find_islands(g, {}), inj);
      const auto oracle = testing::dense_dc_flows(g, {}, inj);
      for (std::size_t i = 0; i < sol.flow_mw.size(); ++i) {
        CHECK(std::abs(sol.flow_mw[i] - oracle[i]) / g.base_mva <= 1e-8);
      }
    }
  }
}

TEST_CASE("lossless cut balance on random cuts") {
  Rng rng(7u);
  const GridCase g = testing::stress_case();
  const auto inj = balanced_injections(g);
  const auto sol = solve_dc(g, find_islands(g, {}), inj);
  for (int rep = 0; rep < 20; ++rep) {
    // Random bus subset S: net injection into S equals net flow out of S.
    std::vector<char> in_s(g.buses.size(), 0);
    for (std::size_t i = 0; i < g.buses.size(); ++i) in_s[i] = rng.next_below(2) == 1;
    double net_inj = 0.0;
    for (std::size_t i = 0; i < g.buses.size(); ++i) {
      if (in_s[i]) net_inj += inj[i];
    }
    double net_flow_out = 0.0;
    for (std::size_t bi = 0; bi < g.branches.size(); ++bi) {
      const auto& br = g.branches[bi];
      const bool f_in = in_s[static_cast<std::size_t>(g.bus_index(br.from_bus))];
      const bool t_in = in_s[static_cast<std::size_t>(g.bus_index(br.to_bus))];
      if (f_in && !t_in) net_flow_out += sol.flow_mw[bi];
      if (!f_in && t_in) net_flow_out -= sol.flow_mw[bi];
    }
    CHECK(std::abs(net_inj - net_flow_out) <= 1e-6);
  }
}

TEST_CASE("singular system reported") {
  GridCase g = testing::triangle3();
  g.branches[0].reactance_pu = 1e-310;  // susceptance overflows to inf
  g.rebuild_index();
  std::vector<double> inj = {100.0, -100.0, 0.0};
  CHECK_THROWS_AS(solve_dc(g, find_islands(g, {}), inj), SingularSystem);
}
