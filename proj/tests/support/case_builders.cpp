#include "case_builders.hpp"

#include <cmath>

namespace gridrisk::testing {

namespace {

Bus make_bus(int id, double x, double y, double load) {
  Bus b;
  b.id = id;
  b.x_km = x;
  b.y_km = y;
  b.load_mw = load;
  return b;
}

Branch make_branch(int id, int from, int to, double x_pu, double rate_a) {
  Branch br;
  br.id = id;
  br.from_bus = from;
  br.to_bus = to;
  br.reactance_pu = x_pu;
  br.rate_a_mw = rate_a;
  return br;
}

Generator make_gen(int id, int bus, double p, double p_max, double p_min = 0.0) {
  Generator g;
  g.id = id;
  g.bus = bus;
  g.p_mw = p;
  g.p_max_mw = p_max;
  g.p_min_mw = p_min;
  return g;
}

void finish(GridCase& g) {
  synthesize_ratings(g);
  g.rebuild_index();
  validate_case(g);
}

}  // namespace

GridCase triangle3() {
  GridCase g;
  g.base_mva = 100.0;
  g.buses = {make_bus(1, 0.0, 0.0, 0.0), make_bus(2, 100.0, 0.0, 100.0),
             make_bus(3, 50.0, 86.6, 0.0)};
  g.branches = {make_branch(1, 1, 2, 0.1, 150.0), make_branch(2, 1, 3, 0.1, 150.0),
                make_branch(3, 3, 2, 0.1, 150.0)};
  g.generators = {make_gen(1, 1, 100.0, 200.0)};
  finish(g);
  return g;
}

GridCase rc10() {
  GridCase g;
  g.base_mva = 100.0;
  // Ring of 8 buses with generators opposite each other, plus a 40 MW load
  // bus D fed only by branches 3 (from bus 1) and 7 (from bus 5).  Ring loads
  // are small enough that no outage combination avoiding {3, 7} can shed 5%.
  const double r = 100.0;
  for (int i = 0; i < 8; ++i) {
    const double ang = 2.0 * M_PI * i / 8.0;
    double load = 0.5;
    if (i == 0) load = 28.0;
    if (i == 4) load = 29.0;
    g.buses.push_back(make_bus(i + 1, r * std::cos(ang), r * std::sin(ang), load));
  }
  g.buses.push_back(make_bus(9, 160.0, 60.0, 40.0));  // D

  g.branches = {
      make_branch(1, 1, 2, 0.1, 100.0),  make_branch(2, 2, 3, 0.1, 100.0),
      make_branch(3, 1, 9, 0.1, 100.0),  make_branch(4, 3, 4, 0.1, 100.0),
      make_branch(5, 4, 5, 0.1, 100.0),  make_branch(6, 5, 6, 0.1, 100.0),
      make_branch(7, 5, 9, 0.1, 100.0),  make_branch(8, 6, 7, 0.1, 100.0),
      make_branch(9, 7, 8, 0.1, 100.0),  make_branch(10, 8, 1, 0.1, 100.0),
  };
  g.generators = {make_gen(1, 1, 50.0, 90.0), make_gen(2, 5, 50.0, 90.0)};
  finish(g);
  return g;
}

GridCase radial4() {
  GridCase g;
  g.base_mva = 100.0;
  g.buses = {make_bus(1, 0.0, 0.0, 20.0), make_bus(2, 50.0, 0.0, 1.0),
             make_bus(3, 100.0, 0.0, 1.0), make_bus(4, 0.0, 80.0, 40.0)};
  g.branches = {make_branch(1, 1, 2, 0.1, 50.0), make_branch(2, 2, 3, 0.1, 50.0),
                make_branch(3, 1, 4, 0.1, 60.0), make_branch(4, 1, 4, 0.1, 60.0)};
  g.generators = {make_gen(1, 1, 62.0, 100.0)};
  finish(g);
  return g;
}

GridCase stress_case() {
  GridCase g;
  g.base_mva = 100.0;

  // Hubs 1..6 on a 250 km hexagon; generators at 1, 3, 5.
  const double hub_r = 250.0;
  double hub_x[7], hub_y[7];
  for (int i = 1; i <= 6; ++i) {
    const double ang = 2.0 * M_PI * (i - 1) / 6.0;
    hub_x[i] = hub_r * std::cos(ang);
    hub_y[i] = hub_r * std::sin(ang);
    g.buses.push_back(make_bus(i, hub_x[i], hub_y[i], 40.0));
  }

  // Pocket loads 11..15 on double feeders between consecutive hubs.
  const double pocket_load[5] = {62.0, 64.0, 66.0, 68.0, 70.0};
  for (int i = 0; i < 5; ++i) {
    const double ang = 2.0 * M_PI * (i + 0.5) / 6.0;
    g.buses.push_back(make_bus(11 + i, 340.0 * std::cos(ang), 340.0 * std::sin(ang),
                               pocket_load[i]));
  }

  // Tri-fed pockets 21..26 inside the ring.
  const double tri_load[6] = {60.0, 61.0, 62.0, 63.0, 64.0, 65.0};
  for (int j = 0; j < 6; ++j) {
    const double ang = 2.0 * M_PI * ((j + 1) % 6) / 6.0;
    g.buses.push_back(make_bus(21 + j, 120.0 * std::cos(ang), 120.0 * std::sin(ang),
                               tri_load[j]));
  }

  // Chain-backed pockets: W1 (31) near hub 6 with a 10-bus chain from hub 3;
  // W2 (32) near hub 2 with a 6-bus chain from hub 5.
  g.buses.push_back(make_bus(31, 200.0, -330.0, 72.0));
  g.buses.push_back(make_bus(32, 200.0, 330.0, 70.0));
  for (int i = 1; i <= 10; ++i) {
    const double t = static_cast<double>(i) / 11.0;
    g.buses.push_back(make_bus(40 + i, hub_x[3] + t * (200.0 - hub_x[3]),
                               hub_y[3] + t * (-330.0 - hub_y[3]), 2.0));
  }
  for (int i = 1; i <= 6; ++i) {
    const double t = static_cast<double>(i) / 7.0;
    g.buses.push_back(make_bus(50 + i, hub_x[5] + t * (200.0 - hub_x[5]),
                               hub_y[5] + t * (330.0 - hub_y[5]), 2.0));
  }

  // Ratings are deliberately generous: every malignancy in this case is
  // islanding-driven, which keeps the reference sets independent of trip
  // scheduling details and reliably discoverable by subset sampling.
  // Ring 101..106.
  for (int i = 0; i < 6; ++i) {
    g.branches.push_back(make_branch(101 + i, i + 1, (i + 1) % 6 + 1, 0.04, 900.0));
  }
  // Pocket feeders 201..210: P_i from hubs i and i+1.
  for (int i = 0; i < 5; ++i) {
    g.branches.push_back(make_branch(201 + 2 * i, i + 1, 11 + i, 0.08, 3.0 * pocket_load[i]));
    g.branches.push_back(make_branch(202 + 2 * i, i + 2, 11 + i, 0.08, 3.0 * pocket_load[i]));
  }
  // Tri feeders 301..318: T_j from hubs j, j+1, j+2 (wrapping).
  for (int j = 0; j < 6; ++j) {
    for (int f = 0; f < 3; ++f) {
      g.branches.push_back(
          make_branch(301 + 3 * j + f, (j + f) % 6 + 1, 21 + j, 0.10, 3.0 * tri_load[j]));
    }
  }
  // W feeders: parallel circuits (distance 0 between them).
  g.branches.push_back(make_branch(401, 6, 31, 0.12, 250.0));
  g.branches.push_back(make_branch(402, 6, 31, 0.12, 250.0));
  g.branches.push_back(make_branch(403, 2, 32, 0.12, 250.0));
  g.branches.push_back(make_branch(404, 2, 32, 0.12, 250.0));
  // Chain A 501..511: hub 3 -> 41..50 -> W1.
  g.branches.push_back(make_branch(501, 3, 41, 0.05, 250.0));
  for (int i = 1; i < 10; ++i) {
    g.branches.push_back(make_branch(501 + i, 40 + i, 41 + i, 0.05, 250.0));
  }
  g.branches.push_back(make_branch(511, 50, 31, 0.05, 250.0));
  // Chain B 521..527: hub 5 -> 51..56 -> W2.
  g.branches.push_back(make_branch(521, 5, 51, 0.05, 250.0));
  for (int i = 1; i < 6; ++i) {
    g.branches.push_back(make_branch(521 + i, 50 + i, 51 + i, 0.05, 250.0));
  }
  g.branches.push_back(make_branch(527, 56, 32, 0.05, 250.0));

  g.generators = {make_gen(1, 1, 400.0, 600.0), make_gen(2, 3, 380.0, 500.0),
                  make_gen(3, 5, 339.0, 450.0)};
  finish(g);
  return g;
}

StressDesign stress_design() {
  StressDesign d;
  for (int i = 0; i < 5; ++i) {
    d.pocket_pairs.push_back({201 + 2 * i, 202 + 2 * i});
  }
  for (int j = 0; j < 6; ++j) {
    d.tri_triples.push_back({301 + 3 * j, 302 + 3 * j, 303 + 3 * j});
  }
  for (int i = 0; i < 11; ++i) d.chain_triples.push_back({401, 402, 501 + i});
  for (int i = 0; i < 7; ++i) d.chain_triples.push_back({403, 404, 521 + i});
  d.pair_max = {401, 402};
  return d;
}

GridCase overload_quad() {
  GridCase g;
  g.base_mva = 100.0;
  g.buses = {make_bus(1, 0.0, 0.0, 0.0), make_bus(2, 60.0, 0.0, 150.0)};
  g.branches = {make_branch(1, 1, 2, 0.1, 100.0), make_branch(2, 1, 2, 0.1, 100.0),
                make_branch(3, 1, 2, 0.1, 60.0), make_branch(4, 1, 2, 0.1, 45.0)};
  g.generators = {make_gen(1, 1, 150.0, 200.0)};
  finish(g);
  return g;
}

std::string matpower5_text() {
  return R"(function mpc = case5
% 5-bus hand-written fixture
mpc.version = '2';
mpc.baseMVA = 100;

%% bus data
%	bus_i	type	Pd	Qd	Gs	Bs	area	Vm	Va	baseKV	zone	Vmax	Vmin
mpc.bus = [
	1	3	0	0	0	0	1	1	0	230	1	1.1	0.9;
	2	1	60	0	0	0	1	1	0	230	1	1.1	0.9;
	3	1	70	0	0	0	1	1	0	230	1	1.1	0.9;
	4	2	40	0	0	0	1	1	0	230	1	1.1	0.9;
	5	1	30	0	0	0	1	1	0	230	1	1.1	0.9;
];

%% generator data
%	bus	Pg	Qg	Qmax	Qmin	Vg	mBase	status	Pmax	Pmin
mpc.gen = [
	1	120	0	50	-50	1	100	1	250	0;
	4	80	0	50	-50	1	100	1	150	0;
];

%% branch data
%	fbus	tbus	r	x	b	rateA	rateB	rateC	ratio	angle	status	angmin	angmax
mpc.branch = [
	1	2	0.01	0.06	0	120	130	150	0	0	1	-360	360;
	2	3	0.01	0.05	0	100	0	0	0	0	1	-360	360;
	3	4	0.01	0.04	0	90	99	135	0	0	1	-360	360;
	4	5	0.01	0.04	0	80	0	0	0	0	1	-360	360;
	5	1	0.01	0.07	0	110	121	165	0	0	1	-360	360;
	2	4	0.02	0.10	0	60	66	90	0	0	1	-360	360;
];
)";
}

std::string matpower5_coords_csv() {
  return "bus_id,x_km,y_km\n1,0,0\n2,80,0\n3,160,40\n4,120,120\n5,30,90\n";
}

}  // namespace gridrisk::testing
