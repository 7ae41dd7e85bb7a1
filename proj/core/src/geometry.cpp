#include "gridrisk/geometry.hpp"

#include <cmath>

namespace gridrisk {

namespace {
double hypot2(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }
}  // namespace

double point_segment_distance(const Point& v, const Segment& u) {
  const double mx = u.p2.x - u.p1.x;
  const double my = u.p2.y - u.p1.y;
  const double mm = mx * mx + my * my;
  if (mm == 0.0) return hypot2(v.x - u.p1.x, v.y - u.p1.y);
  const double t = ((v.x - u.p1.x) * mx + (v.y - u.p1.y) * my) / mm;
  if (t <= 0.0) return hypot2(v.x - u.p1.x, v.y - u.p1.y);
  if (t >= 1.0) return hypot2(v.x - u.p2.x, v.y - u.p2.y);
  return hypot2(v.x - (u.p1.x + t * mx), v.y - (u.p1.y + t * my));
}

double branch_distance(const Segment& u, const Segment& v) {
  return (point_segment_distance(u.p1, v) + point_segment_distance(u.p2, v) +
          point_segment_distance(v.p1, u) + point_segment_distance(v.p2, u)) /
         4.0;
}

Segment branch_segment(const GridCase& gcase, int branch_id) {
  const Branch& br = gcase.branch(branch_id);
  const Bus& a = gcase.bus(br.from_bus);
  const Bus& b = gcase.bus(br.to_bus);
  return Segment{{a.x_km, a.y_km}, {b.x_km, b.y_km}};
}

DistanceMatrix::DistanceMatrix(const GridCase& gcase, const std::vector<int>& branch_ids)
    : n_(branch_ids.size()), ids_(branch_ids), d_(branch_ids.size() * branch_ids.size(), 0.0) {
  std::vector<Segment> segs;
  segs.reserve(n_);
  for (int id : ids_) segs.push_back(branch_segment(gcase, id));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const double d = branch_distance(segs[i], segs[j]);
      d_[i * n_ + j] = d;
      d_[j * n_ + i] = d;
    }
  }
}

}  // namespace gridrisk
