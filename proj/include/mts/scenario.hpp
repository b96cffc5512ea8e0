#pragma once

#include "mts/config.hpp"
#include "mts/rng.hpp"

#include <vector>

namespace mts {

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

double distance(Point a, Point b);

struct Topology {
  double area_side_m = 0.0;
  std::vector<Point> sbs;
  std::vector<Point> users;
  std::vector<double> headings;  // radians, one per user

  bool operator==(const Topology&) const = default;
};

/// Centers of `count` cells on a hexagonal lattice, centered in the square.
std::vector<Point> hexagonal_layout(int count, double area_side_m);

/// SBSs on the hexagonal layout; users i.i.d. uniform over the area.
Topology place_topology(const ScenarioConfig& cfg, Rng& rng);

/// Random-direction step: every user moves speed*dt along its heading,
/// reflecting off the area boundary; headings are then redrawn.
Topology step_mobility(const Topology& top, double speed_mps, double dt, Rng& rng);

}  // namespace mts
