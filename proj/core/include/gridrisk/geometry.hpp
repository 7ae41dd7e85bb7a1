#pragma once

#include <vector>

#include "gridrisk/grid_case.hpp"

namespace gridrisk {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Point p1;
  Point p2;
};

// Minimum Euclidean distance from v to the segment u, km.  Degenerate
// zero-length segments reduce to the point distance.
double point_segment_distance(const Point& v, const Segment& u);

// Mean of the four endpoint-to-segment distances; symmetric, non-negative,
// zero iff the segments share both endpoints.  A semi-metric: the triangle
// inequality can fail (see the regression fixture in the tests).
double branch_distance(const Segment& u, const Segment& v);

Segment branch_segment(const GridCase& gcase, int branch_id);

// Dense symmetric pairwise distance matrix over the given branches.
class DistanceMatrix {
 public:
  DistanceMatrix(const GridCase& gcase, const std::vector<int>& branch_ids);

  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::size_t size() const { return n_; }
  const std::vector<int>& ids() const { return ids_; }

 private:
  std::size_t n_;
  std::vector<int> ids_;
  std::vector<double> d_;
};

}  // namespace gridrisk
