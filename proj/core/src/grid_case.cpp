#include "gridrisk/grid_case.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace gridrisk {

double rate_to_probability(double rate_hours_per_year) {
  if (rate_hours_per_year < 0.0 || !std::isfinite(rate_hours_per_year)) {
    throw DomainError("outage rate must be finite and non-negative");
  }
  const double p = rate_hours_per_year / 8760.0;
  if (p >= 0.5) {
    throw DomainError("outage rate " + std::to_string(rate_hours_per_year) +
                      " h/yr implies probability >= 0.5; marginal calibration is undefined");
  }
  return p;
}

void GridCase::rebuild_index() {
  bus_index_.clear();
  branch_index_.clear();
  bus_index_.reserve(buses.size());
  branch_index_.reserve(branches.size());
  for (std::size_t i = 0; i < buses.size(); ++i) bus_index_[buses[i].id] = static_cast<int>(i);
  for (std::size_t i = 0; i < branches.size(); ++i)
    branch_index_[branches[i].id] = static_cast<int>(i);
}

int GridCase::bus_index(int id) const {
  auto it = bus_index_.find(id);
  if (it == bus_index_.end()) throw ValidationError("unknown bus id " + std::to_string(id));
  return it->second;
}

int GridCase::branch_index(int id) const {
  auto it = branch_index_.find(id);
  if (it == branch_index_.end()) throw ValidationError("unknown branch id " + std::to_string(id));
  return it->second;
}

std::vector<int> GridCase::branch_ids() const {
  std::vector<int> ids;
  ids.reserve(branches.size());
  for (const auto& b : branches) ids.push_back(b.id);
  return ids;
}

double GridCase::total_load_mw() const {
  double s = 0.0;
  for (const auto& b : buses) s += b.load_mw;
  return s;
}

double GridCase::total_gen_mw() const {
  double s = 0.0;
  for (const auto& g : generators) s += g.p_mw;
  return s;
}

double GridCase::total_gen_capacity_mw() const {
  double s = 0.0;
  for (const auto& g : generators) s += g.p_max_mw;
  return s;
}

double GridCase::branch_outage_probability(int branch_id) const {
  const Branch& b = branch(branch_id);
  return b.outage_probability.value_or(outage_probability);
}

namespace {

int count_components(const GridCase& gcase) {
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
  for (const auto& br : gcase.branches) {
    if (!br.in_service) continue;
    const int a = find(gcase.bus_index(br.from_bus));
    const int b = find(gcase.bus_index(br.to_bus));
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  }
  std::set<int> roots;
  for (int i = 0; i < n; ++i) roots.insert(find(i));
  return static_cast<int>(roots.size());
}

}  // namespace

std::vector<std::string> validate_case(GridCase& gcase) {
  std::vector<std::string> warnings;
  if (gcase.buses.empty()) throw ValidationError("case has no buses");
  if (!(gcase.base_mva > 0.0)) throw ValidationError("base_mva must be positive");
  if (gcase.outage_probability < 0.0 || gcase.outage_probability >= 0.5) {
    throw ValidationError("default outage probability must lie in [0, 0.5)");
  }

  std::set<int> seen;
  for (const auto& b : gcase.buses) {
    if (!seen.insert(b.id).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    if (!std::isfinite(b.x_km) || !std::isfinite(b.y_km))
      throw ValidationError("bus " + std::to_string(b.id) + " has non-finite coordinates");
    if (b.load_mw < 0.0)
      throw ValidationError("bus " + std::to_string(b.id) + " has negative load");
  }
  gcase.rebuild_index();

  seen.clear();
  for (const auto& br : gcase.branches) {
    if (!seen.insert(br.id).second)
      throw ValidationError("duplicate branch id " + std::to_string(br.id));
    if (br.from_bus == br.to_bus)
      throw ValidationError("branch " + std::to_string(br.id) + " connects a bus to itself");
    gcase.bus_index(br.from_bus);
    gcase.bus_index(br.to_bus);
    if (!(br.reactance_pu > 0.0) || !std::isfinite(br.reactance_pu))
      throw ValidationError("branch " + std::to_string(br.id) + " has nonpositive reactance");
    if (!(br.rate_a_mw > 0.0))
      throw ValidationError("branch " + std::to_string(br.id) + " has nonpositive rate_a");
    const double rb = br.rate_b_mw.value_or(1.10 * br.rate_a_mw);
    const double rc = br.rate_c_mw.value_or(1.50 * br.rate_a_mw);
    if (br.rate_a_mw > rb + 1e-9 || rb > rc + 1e-9)
      throw ValidationError("branch " + std::to_string(br.id) +
                            " violates rate_a <= rate_b <= rate_c");
    if (br.outage_probability &&
        (*br.outage_probability < 0.0 || *br.outage_probability >= 0.5))
      throw ValidationError("branch " + std::to_string(br.id) +
                            " outage probability outside [0, 0.5)");
  }

  seen.clear();
  for (const auto& g : gcase.generators) {
    if (!seen.insert(g.id).second)
      throw ValidationError("duplicate generator id " + std::to_string(g.id));
    gcase.bus_index(g.bus);
    if (g.p_min_mw < 0.0)
      throw ValidationError("generator " + std::to_string(g.id) + " has negative p_min");
    if (g.p_min_mw > g.p_max_mw + 1e-9)
      throw ValidationError("generator " + std::to_string(g.id) + " has p_min > p_max");
    if (g.p_mw < g.p_min_mw - 1e-9 || g.p_mw > g.p_max_mw + 1e-9)
      throw ValidationError("generator " + std::to_string(g.id) + " output outside limits");
  }

  const double load = gcase.total_load_mw();
  if (gcase.total_gen_capacity_mw() + 1e-9 < load) {
    throw ValidationError("total generation capacity cannot meet total load at base case");
  }

  const int components = count_components(gcase);
  if (components > 1) {
    std::ostringstream os;
    os << "base topology is disconnected (" << components << " components)";
    warnings.push_back(os.str());
  }

  // The cascade engine assumes a balanced base state.
  const double gen = gcase.total_gen_mw();
  if (std::abs(gen - load) > 1e-6 * std::max(1.0, load)) {
    redispatch_to_target(gcase.generators, load);
    std::ostringstream os;
    os << "base dispatch rebalanced from " << gen << " MW to match " << load << " MW of load";
    warnings.push_back(os.str());
  }
  return warnings;
}

void synthesize_ratings(GridCase& gcase) {
  for (auto& br : gcase.branches) {
    if (!(br.rate_a_mw > 0.0))
      throw ValidationError("branch " + std::to_string(br.id) +
                            " has nonpositive rate_a; cannot synthesize emergency ratings");
    if (!br.rate_b_mw) br.rate_b_mw = 1.10 * br.rate_a_mw;
    if (!br.rate_c_mw) br.rate_c_mw = 1.50 * br.rate_a_mw;
  }
}

void redispatch_to_target(std::vector<Generator>& gens, double target_mw) {
  double p_sum = 0.0, min_sum = 0.0, max_sum = 0.0;
  for (const auto& g : gens) {
    p_sum += g.p_mw;
    min_sum += g.p_min_mw;
    max_sum += g.p_max_mw;
  }
  if (target_mw > max_sum + 1e-9 || target_mw < min_sum - 1e-9) {
    throw InfeasibleDispatch("dispatch target " + std::to_string(target_mw) +
                             " MW outside generator envelope [" + std::to_string(min_sum) +
                             ", " + std::to_string(max_sum) + "]");
  }
  if (std::abs(target_mw - p_sum) < 1e-12 * std::max(1.0, std::abs(target_mw))) return;
  if (target_mw > p_sum) {
    const double headroom = max_sum - p_sum;
    const double t = headroom > 0.0 ? (target_mw - p_sum) / headroom : 0.0;
    for (auto& g : gens) g.p_mw += t * (g.p_max_mw - g.p_mw);
  } else {
    const double floor_room = p_sum - min_sum;
    const double t = floor_room > 0.0 ? (p_sum - target_mw) / floor_room : 0.0;
    for (auto& g : gens) g.p_mw -= t * (g.p_mw - g.p_min_mw);
  }
}

GridCase scale_load(const GridCase& gcase, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DomainError("load scaling factor must be positive and finite");
  }
  GridCase scaled = gcase;
  for (auto& b : scaled.buses) b.load_mw *= factor;
  const double target = scaled.total_load_mw();
  if (target > scaled.total_gen_capacity_mw() + 1e-9) {
    throw InfeasibleDispatch("scaled load " + std::to_string(target) +
                             " MW exceeds total generation capacity");
  }
  redispatch_to_target(scaled.generators, target);
  scaled.rebuild_index();
  return scaled;
}

}  // namespace gridrisk
