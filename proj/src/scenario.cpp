#include "mts/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mts {

namespace {

// Folds a coordinate back into [0, side] by mirror reflection.
double reflect(double v, double side) {
  const double period = 2.0 * side;
  v = std::fmod(v, period);
  if (v < 0.0) v += period;
  if (v > side) v = period - v;
  return v;
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<Point> hexagonal_layout(int count, double area_side_m) {
  if (count < 1) throw std::invalid_argument("hexagonal_layout: count must be >= 1");
  if (count == 1) return {{area_side_m / 2.0, area_side_m / 2.0}};

  const int rows = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  const int cols = (count + rows - 1) / rows;
  const double spacing = area_side_m / cols;
  const double row_height = spacing * std::sqrt(3.0) / 2.0;

  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const int r = i / cols;
    const int c = i % cols;
    const double offset = (r % 2 == 1) ? spacing / 2.0 : 0.0;
    pts.push_back({c * spacing + offset, r * row_height});
  }

  double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const double dx = area_side_m / 2.0 - (min_x + max_x) / 2.0;
  const double dy = area_side_m / 2.0 - (min_y + max_y) / 2.0;
  for (auto& p : pts) {
    p.x += dx;
    p.y += dy;
  }
  return pts;
}

Topology place_topology(const ScenarioConfig& cfg, Rng& rng) {
  Topology top;
  top.area_side_m = cfg.area_side_m;
  top.sbs = hexagonal_layout(cfg.num_sbs, cfg.area_side_m);
  top.users.reserve(cfg.num_users);
  top.headings.reserve(cfg.num_users);
  for (int u = 0; u < cfg.num_users; ++u) {
    const double x = rng.uniform(0.0, cfg.area_side_m);
    const double y = rng.uniform(0.0, cfg.area_side_m);
    top.users.push_back({x, y});
  }
  for (int u = 0; u < cfg.num_users; ++u) {
    top.headings.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
  }
  return top;
}

Topology step_mobility(const Topology& top, double speed_mps, double dt, Rng& rng) {
  if (!(dt >= 0.0)) throw std::invalid_argument("step_mobility: dt must be >= 0");
  Topology next = top;
  const double step = speed_mps * dt;
  for (std::size_t u = 0; u < next.users.size(); ++u) {
    auto& p = next.users[u];
    p.x = reflect(p.x + step * std::cos(top.headings[u]), top.area_side_m);
    p.y = reflect(p.y + step * std::sin(top.headings[u]), top.area_side_m);
  }
  for (auto& h : next.headings) h = rng.uniform(0.0, 2.0 * std::numbers::pi);
  return next;
}

}  // namespace mts
