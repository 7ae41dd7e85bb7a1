#pragma once

#include <unordered_set>
#include <vector>

#include "gridrisk/grid_case.hpp"
#include "gridrisk/power_flow.hpp"

namespace gridrisk {

struct SimConfig {
  double blackout_threshold = 0.05;  // shed fraction at or above which a cascade is a blackout
  int max_iterations = 0;            // 0 -> 10 * branch count
};

struct CascadeOutcome {
  double load_shed_mw = 0.0;
  double shed_fraction = 0.0;
  bool is_blackout = false;
  std::vector<int> trip_sequence;  // overload trips, in order; excludes initiating outages
  int iterations = 0;
  bool converged = true;
};

struct IslandBalance {
  double served_load_mw = 0.0;
  double shed_mw = 0.0;
  // Net injection per island bus, aligned with island.bus_ids.
  std::vector<double> injections_mw;
};

// Quasi-steady-state balance of one island: if capacity < load, generators
// run at p_max and load is shed pro-rata; if minimum generation > load,
// outputs ramp toward p_min and generators trip lowest-p_max-first until
// feasible; islands without generation shed everything.
IslandBalance rebalance_island(const Island& island, const GridCase& gcase);

// Applies the initiating outages, then iterates: island detection, island
// rebalancing, DC solve, and a single trip of the most rate_c-overloaded
// branch, until equilibrium or the iteration limit.
CascadeOutcome simulate(const GridCase& gcase, const std::vector<int>& initiating_outages,
                        const SimConfig& config = {});

bool is_blackout_set(const GridCase& gcase, const std::vector<int>& outage_set,
                     const SimConfig& config = {});

}  // namespace gridrisk
