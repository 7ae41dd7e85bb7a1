#pragma once

#include <unordered_set>
#include <vector>

#include "gridrisk/grid_case.hpp"

namespace gridrisk {

struct Island {
  std::vector<int> bus_ids;     // sorted
  std::vector<int> branch_ids;  // sorted, in-service branches inside the island
  int slack_bus_id = 0;
};

struct IslandPartition {
  std::vector<Island> islands;  // ordered by smallest bus id
};

struct FlowSolution {
  // Indexed by case bus/branch position.  Out-of-service branches carry 0.
  std::vector<double> theta_rad;
  std::vector<double> flow_mw;
  bool converged = false;
};

// Connected components of the in-service graph after removing out_branches.
// Slack per island: generator bus with the largest p_max (ties: lowest bus
// id); islands without generators use their lowest bus id as angle reference.
IslandPartition find_islands(const GridCase& gcase,
                             const std::unordered_set<int>& out_branch_ids);

// Solves B*theta = P per island (slack angle 0) via sparse LDLT of the
// reduced susceptance matrix and reports branch flows in MW.  Injections are
// net MW per case bus position and must sum to ~0 within each island
// (<= 1e-6 MW); KCL residuals are verified to <= 1e-8 pu.
FlowSolution solve_dc(const GridCase& gcase, const IslandPartition& partition,
                      const std::vector<double>& injections_mw);

// Generic overload relief for imported cases whose base flows exceed their
// normal ratings: raises rate_a to margin * |base flow| where violated and
// rescales rate_b/rate_c by the same factor.  No claim of equivalence to any
// published adjusted case.
GridCase relieve_base_overloads(const GridCase& gcase, double margin = 1.10);

}  // namespace gridrisk
