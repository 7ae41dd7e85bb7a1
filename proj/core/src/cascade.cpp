#include "gridrisk/cascade.hpp"

#include <algorithm>
#include <cmath>

namespace gridrisk {

IslandBalance rebalance_island(const Island& island, const GridCase& gcase) {
  IslandBalance bal;
  bal.injections_mw.assign(island.bus_ids.size(), 0.0);

  double load = 0.0;
  for (std::size_t i = 0; i < island.bus_ids.size(); ++i) {
    load += gcase.bus(island.bus_ids[i]).load_mw;
  }

  // Island generators, id order (stable trip ordering).
  struct G {
    const Generator* gen;
    double p;  // working output
  };
  std::vector<G> gens;
  {
    std::unordered_set<int> members(island.bus_ids.begin(), island.bus_ids.end());
    for (const auto& gen : gcase.generators) {
      if (members.count(gen.bus)) gens.push_back({&gen, gen.p_mw});
    }
  }

  // Trip generators lowest-p_max-first (tie: lowest id) while even minimum
  // output exceeds island load.
  auto sum_min = [&] {
    double s = 0.0;
    for (const auto& g : gens) s += g.gen->p_min_mw;
    return s;
  };
  while (!gens.empty() && sum_min() > load + 1e-12) {
    auto victim = std::min_element(gens.begin(), gens.end(), [](const G& a, const G& b) {
      if (a.gen->p_max_mw != b.gen->p_max_mw) return a.gen->p_max_mw < b.gen->p_max_mw;
      return a.gen->id < b.gen->id;
    });
    gens.erase(victim);
  }

  double served = load;
  double load_scale = 1.0;
  if (gens.empty()) {
    served = 0.0;
    load_scale = 0.0;
  } else {
    double p_sum = 0.0, max_sum = 0.0, min_sum = 0.0;
    for (const auto& g : gens) {
      p_sum += g.p;
      max_sum += g.gen->p_max_mw;
      min_sum += g.gen->p_min_mw;
    }
    if (max_sum < load - 1e-12) {
      // Capacity deficit: everything at p_max, shed the remainder pro-rata.
      for (auto& g : gens) g.p = g.gen->p_max_mw;
      served = max_sum;
      load_scale = load > 0.0 ? served / load : 1.0;
    } else {
      // Ramp from the current dispatch toward the binding limit.
      if (p_sum < served) {
        const double head = max_sum - p_sum;
        const double t = head > 0.0 ? (served - p_sum) / head : 0.0;
        for (auto& g : gens) g.p += t * (g.gen->p_max_mw - g.p);
      } else if (p_sum > served) {
        const double floor_room = p_sum - min_sum;
        const double t = floor_room > 0.0 ? (p_sum - served) / floor_room : 0.0;
        for (auto& g : gens) g.p -= t * (g.p - g.gen->p_min_mw);
      }
    }
  }
  bal.served_load_mw = served;
  bal.shed_mw = load - served;

  for (std::size_t i = 0; i < island.bus_ids.size(); ++i) {
    bal.injections_mw[i] = -gcase.bus(island.bus_ids[i]).load_mw * load_scale;
  }
  for (const auto& g : gens) {
    const auto it = std::lower_bound(island.bus_ids.begin(), island.bus_ids.end(), g.gen->bus);
    bal.injections_mw[static_cast<std::size_t>(it - island.bus_ids.begin())] += g.p;
  }
  return bal;
}

CascadeOutcome simulate(const GridCase& gcase, const std::vector<int>& initiating_outages,
                        const SimConfig& config) {
  if (!(config.blackout_threshold > 0.0 && config.blackout_threshold < 1.0)) {
    throw ValidationError("blackout threshold must lie in (0, 1)");
  }
  const double pre_event_load = gcase.total_load_mw();
  const int max_iter =
      config.max_iterations > 0 ? config.max_iterations : 10 * gcase.n_branches();

  std::unordered_set<int> out;
  for (int id : initiating_outages) {
    gcase.branch_index(id);  // validates
    out.insert(id);
  }

  CascadeOutcome outcome;
  double served = pre_event_load;
  for (;;) {
    ++outcome.iterations;
    const IslandPartition part = find_islands(gcase, out);

    std::vector<double> injections(gcase.buses.size(), 0.0);
    served = 0.0;
    for (const auto& isl : part.islands) {
      const IslandBalance bal = rebalance_island(isl, gcase);
      served += bal.served_load_mw;
      for (std::size_t i = 0; i < isl.bus_ids.size(); ++i) {
        injections[static_cast<std::size_t>(gcase.bus_index(isl.bus_ids[i]))] =
            bal.injections_mw[i];
      }
    }

    const FlowSolution flow = solve_dc(gcase, part, injections);

    // Worst overload relative to the long-term emergency rating.
    int worst_id = -1;
    double worst_ratio = 1.0;
    for (const auto& br : gcase.branches) {
      if (!br.in_service || out.count(br.id)) continue;
      const double f = std::abs(flow.flow_mw[static_cast<std::size_t>(gcase.branch_index(br.id))]);
      const double ratio = f / br.rate_c();
      if (ratio > worst_ratio && f > br.rate_c()) {
        worst_ratio = ratio;
        worst_id = br.id;
      } else if (worst_id >= 0 && ratio == worst_ratio && br.id < worst_id) {
        worst_id = br.id;
      }
    }
    if (worst_id < 0) {
      outcome.converged = true;
      break;
    }
    if (outcome.iterations >= max_iter) {
      outcome.converged = false;
      break;
    }
    out.insert(worst_id);
    outcome.trip_sequence.push_back(worst_id);
  }

  outcome.load_shed_mw = std::max(0.0, pre_event_load - served);
  outcome.shed_fraction = pre_event_load > 0.0 ? outcome.load_shed_mw / pre_event_load : 0.0;
  outcome.is_blackout = outcome.shed_fraction >= config.blackout_threshold;
  return outcome;
}

bool is_blackout_set(const GridCase& gcase, const std::vector<int>& outage_set,
                     const SimConfig& config) {
  return simulate(gcase, outage_set, config).is_blackout;
}

}  // namespace gridrisk
