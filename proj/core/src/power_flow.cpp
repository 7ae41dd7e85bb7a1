#include "gridrisk/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace gridrisk {

IslandPartition find_islands(const GridCase& gcase,
                             const std::unordered_set<int>& out_branch_ids) {
  const int n = static_cast<int>(gcase.buses.size());
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };

  auto branch_active = [&](const Branch& br) {
    return br.in_service && out_branch_ids.find(br.id) == out_branch_ids.end();
  };

  for (const auto& br : gcase.branches) {
    if (!branch_active(br)) continue;
    int a = find(gcase.bus_index(br.from_bus));
    int b = find(gcase.bus_index(br.to_bus));
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  }

  // Group buses by root; key islands by their smallest bus id for a
  // deterministic ordering.
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    groups[static_cast<std::size_t>(find(i))].push_back(gcase.buses[static_cast<std::size_t>(i)].id);
  }

  IslandPartition part;
  for (auto& g : groups) {
    if (g.empty()) continue;
    Island isl;
    std::sort(g.begin(), g.end());
    isl.bus_ids = std::move(g);
    part.islands.push_back(std::move(isl));
  }
  std::sort(part.islands.begin(), part.islands.end(),
            [](const Island& a, const Island& b) { return a.bus_ids[0] < b.bus_ids[0]; });

  // Assign in-service branches and pick slacks.
  std::vector<int> island_of_bus(static_cast<std::size_t>(n), -1);
  for (std::size_t k = 0; k < part.islands.size(); ++k) {
    for (int id : part.islands[k].bus_ids) {
      island_of_bus[static_cast<std::size_t>(gcase.bus_index(id))] = static_cast<int>(k);
    }
  }
  for (const auto& br : gcase.branches) {
    if (!branch_active(br)) continue;
    const int k = island_of_bus[static_cast<std::size_t>(gcase.bus_index(br.from_bus))];
    part.islands[static_cast<std::size_t>(k)].branch_ids.push_back(br.id);
  }
  for (auto& isl : part.islands) {
    std::sort(isl.branch_ids.begin(), isl.branch_ids.end());
  }

  // Slack: largest p_max generator bus, tie-break lowest bus id; islands
  // without generators use their lowest bus id as angle reference.
  for (std::size_t k = 0; k < part.islands.size(); ++k) {
    Island& isl = part.islands[k];
    double best_pmax = -1.0;
    int best_bus = isl.bus_ids[0];
    bool has_gen = false;
    for (const auto& gen : gcase.generators) {
      const int gi = island_of_bus[static_cast<std::size_t>(gcase.bus_index(gen.bus))];
      if (gi != static_cast<int>(k)) continue;
      if (!has_gen || gen.p_max_mw > best_pmax ||
          (gen.p_max_mw == best_pmax && gen.bus < best_bus)) {
        has_gen = true;
        best_pmax = gen.p_max_mw;
        best_bus = gen.bus;
      }
    }
    isl.slack_bus_id = best_bus;
  }
  return part;
}

FlowSolution solve_dc(const GridCase& gcase, const IslandPartition& partition,
                      const std::vector<double>& injections_mw) {
  const std::size_t n_bus = gcase.buses.size();
  const std::size_t n_br = gcase.branches.size();
  if (injections_mw.size() != n_bus) {
    throw ValidationError("injection vector length does not match bus count");
  }

  FlowSolution sol;
  sol.theta_rad.assign(n_bus, 0.0);
  sol.flow_mw.assign(n_br, 0.0);

  for (const auto& isl : partition.islands) {
    const int nb = static_cast<int>(isl.bus_ids.size());

    double imbalance = 0.0;
    for (int id : isl.bus_ids) imbalance += injections_mw[static_cast<std::size_t>(gcase.bus_index(id))];
    if (std::abs(imbalance) > 1e-6) {
      throw ValidationError("island injections sum to " + std::to_string(imbalance) +
                            " MW; caller must balance each island first");
    }
    if (nb == 1) continue;  // vacuous system, angle 0, no flows

    // Local numbering with the slack placed last so the reduced system is a
    // leading block.
    std::vector<int> local_of_case(n_bus, -1);
    std::vector<int> case_of_local;
    case_of_local.reserve(static_cast<std::size_t>(nb));
    for (int id : isl.bus_ids) {
      if (id == isl.slack_bus_id) continue;
      const int ci = gcase.bus_index(id);
      local_of_case[static_cast<std::size_t>(ci)] = static_cast<int>(case_of_local.size());
      case_of_local.push_back(ci);
    }
    const int slack_case = gcase.bus_index(isl.slack_bus_id);
    const int m = nb - 1;  // reduced dimension

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(isl.branch_ids.size() * 4);
    for (int bid : isl.branch_ids) {
      const Branch& br = gcase.branch(bid);
      const double b = 1.0 / br.reactance_pu;
      if (!std::isfinite(b)) throw SingularSystem("non-finite susceptance on branch " + std::to_string(bid));
      const int fi = local_of_case[static_cast<std::size_t>(gcase.bus_index(br.from_bus))];
      const int ti = local_of_case[static_cast<std::size_t>(gcase.bus_index(br.to_bus))];
      if (fi >= 0) trip.emplace_back(fi, fi, b);
      if (ti >= 0) trip.emplace_back(ti, ti, b);
      if (fi >= 0 && ti >= 0) {
        trip.emplace_back(fi, ti, -b);
        trip.emplace_back(ti, fi, -b);
      }
    }
    Eigen::SparseMatrix<double> B(m, m);
    B.setFromTriplets(trip.begin(), trip.end());

    Eigen::VectorXd p(m);
    for (int i = 0; i < m; ++i) {
      p(i) = injections_mw[static_cast<std::size_t>(case_of_local[static_cast<std::size_t>(i)])] / gcase.base_mva;
    }

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
    solver.compute(B);
    if (solver.info() != Eigen::Success) {
      throw SingularSystem("reduced susceptance matrix is singular");
    }
    Eigen::VectorXd theta = solver.solve(p);
    if (solver.info() != Eigen::Success || !theta.allFinite()) {
      throw SingularSystem("DC power flow solve failed");
    }

    for (int i = 0; i < m; ++i) {
      sol.theta_rad[static_cast<std::size_t>(case_of_local[static_cast<std::size_t>(i)])] = theta(i);
    }
    sol.theta_rad[static_cast<std::size_t>(slack_case)] = 0.0;

    // Branch flows and KCL verification.
    std::vector<double> residual_pu(static_cast<std::size_t>(nb), 0.0);
    std::vector<int> local_all(n_bus, -1);
    for (int i = 0; i < nb; ++i) {
      local_all[static_cast<std::size_t>(gcase.bus_index(isl.bus_ids[static_cast<std::size_t>(i)]))] = i;
    }
    for (int i = 0; i < nb; ++i) {
      residual_pu[static_cast<std::size_t>(i)] =
          injections_mw[static_cast<std::size_t>(gcase.bus_index(isl.bus_ids[static_cast<std::size_t>(i)]))] /
          gcase.base_mva;
    }
    for (int bid : isl.branch_ids) {
      const Branch& br = gcase.branch(bid);
      const std::size_t fi = static_cast<std::size_t>(gcase.bus_index(br.from_bus));
      const std::size_t ti = static_cast<std::size_t>(gcase.bus_index(br.to_bus));
      const double flow_pu = (sol.theta_rad[fi] - sol.theta_rad[ti]) / br.reactance_pu;
      sol.flow_mw[static_cast<std::size_t>(gcase.branch_index(bid))] = flow_pu * gcase.base_mva;
      residual_pu[static_cast<std::size_t>(local_all[fi])] -= flow_pu;
      residual_pu[static_cast<std::size_t>(local_all[ti])] += flow_pu;
    }
    // Slack absorbs its own injection mismatch; every bus must satisfy KCL.
    double max_res = 0.0;
    for (int i = 0; i < nb; ++i) max_res = std::max(max_res, std::abs(residual_pu[static_cast<std::size_t>(i)]));
    if (max_res > 1e-8) {
      throw SingularSystem("KCL residual " + std::to_string(max_res) + " pu exceeds 1e-8");
    }
  }
  sol.converged = true;
  return sol;
}

GridCase relieve_base_overloads(const GridCase& gcase, double margin) {
  if (!(margin >= 1.0)) throw DomainError("relief margin must be >= 1");
  std::vector<double> inj(gcase.buses.size(), 0.0);
  for (std::size_t i = 0; i < gcase.buses.size(); ++i) inj[i] = -gcase.buses[i].load_mw;
  for (const auto& gen : gcase.generators) {
    inj[static_cast<std::size_t>(gcase.bus_index(gen.bus))] += gen.p_mw;
  }
  const FlowSolution sol = solve_dc(gcase, find_islands(gcase, {}), inj);

  GridCase relieved = gcase;
  for (auto& br : relieved.branches) {
    const double flow =
        std::abs(sol.flow_mw[static_cast<std::size_t>(gcase.branch_index(br.id))]);
    const double needed = margin * flow;
    if (br.rate_a_mw < needed) {
      const double scale = needed / br.rate_a_mw;
      br.rate_a_mw = needed;
      if (br.rate_b_mw) br.rate_b_mw = *br.rate_b_mw * scale;
      if (br.rate_c_mw) br.rate_c_mw = *br.rate_c_mw * scale;
    }
  }
  relieved.rebuild_index();
  return relieved;
}

}  // namespace gridrisk
