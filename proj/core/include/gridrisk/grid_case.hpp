#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gridrisk/errors.hpp"

namespace gridrisk {

struct Bus {
  int id = 0;
  double x_km = 0.0;
  double y_km = 0.0;
  double load_mw = 0.0;
  bool is_slack_candidate = true;
};

struct Branch {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double reactance_pu = 0.0;
  double rate_a_mw = 0.0;
  std::optional<double> rate_b_mw;
  std::optional<double> rate_c_mw;
  bool in_service = true;
  std::optional<double> outage_probability;  // overrides the case default

  double rate_b() const { return rate_b_mw.value(); }
  double rate_c() const { return rate_c_mw.value(); }
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_mw = 0.0;
  double p_max_mw = 0.0;
  double p_min_mw = 0.0;
};

// Mean outage rate from the RTS-96 case, hours per year; the uniform default
// applied to every branch unless overridden.
inline constexpr double kDefaultOutageRateHoursPerYear = 0.9158;

// Converts an expected-outage-hours-per-year rate into a per-exposure
// probability (rate / 8760).  The copula marginal calibration requires
// p < 0.5, so rates of 4380 h/yr and above are rejected.
double rate_to_probability(double rate_hours_per_year);

// Immutable system model once loaded/validated; all simulation workers share
// a single const instance.
class GridCase {
 public:
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  double base_mva = 100.0;
  double outage_probability = rate_to_probability(kDefaultOutageRateHoursPerYear);

  // Rebuilds the id -> index maps; call after any structural edit.
  void rebuild_index();

  int bus_index(int id) const;
  int branch_index(int id) const;
  const Bus& bus(int id) const { return buses[static_cast<std::size_t>(bus_index(id))]; }
  const Branch& branch(int id) const {
    return branches[static_cast<std::size_t>(branch_index(id))];
  }

  std::vector<int> branch_ids() const;
  double total_load_mw() const;
  double total_gen_mw() const;
  double total_gen_capacity_mw() const;
  double branch_outage_probability(int branch_id) const;

  int n_branches() const { return static_cast<int>(branches.size()); }

 private:
  std::unordered_map<int, int> bus_index_;
  std::unordered_map<int, int> branch_index_;
};

// Validates invariants (unique ids, positive reactance, rate ordering,
// endpoint sanity, generation adequacy).  Returns human-readable warnings for
// non-fatal findings such as a disconnected base topology.
std::vector<std::string> validate_case(GridCase& gcase);

// rate_b = 1.10 * rate_a and rate_c = 1.50 * rate_a wherever absent; present
// values are preserved.  Idempotent.
void synthesize_ratings(GridCase& gcase);

// Scales every load by `factor` and redispatches generation proportionally
// within [p_min, p_max] so that total generation equals total load.
GridCase scale_load(const GridCase& gcase, double factor);

// Proportionally moves generator outputs toward p_max (deficit) or p_min
// (surplus) until they sum to target_mw.  Throws InfeasibleDispatch when the
// target lies outside [sum p_min, sum p_max].
void redispatch_to_target(std::vector<Generator>& gens, double target_mw);

}  // namespace gridrisk
