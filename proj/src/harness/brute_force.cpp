#include "fwgame/harness.hpp"

#include <cmath>
#include <functional>
#include <limits>

namespace fwgame {

namespace {

struct Region {
  Point lower;
  Point upper;
  const ConvexSet* set = nullptr;
};

Region region_of(const std::optional<ConvexSet>& set, const std::optional<SearchBox>& box,
                 const char* side) {
  if (set) return {set->bbox_lower(), set->bbox_upper(), &*set};
  if (box) return {box->lower, box->upper, nullptr};
  throw UnsupportedOperation(std::string("brute_force_gap: unbounded ") + side +
                             " side without a search box");
}

// Calls visit(point) on every grid point of the region (filtered by the set)
// and on boundary samples of the set.
void sweep(const Region& reg, int resolution, const std::function<void(const Point&)>& visit) {
  const int d = static_cast<int>(reg.lower.size());
  if (d > 2) throw UnsupportedOperation("brute_force_gap: dimension above 2");
  const double n = resolution - 1;
  Point p(d);
  if (d == 1) {
    for (int i = 0; i < resolution; ++i) {
      p[0] = reg.lower[0] + (reg.upper[0] - reg.lower[0]) * (i / n);
      if (!reg.set || reg.set->contains(p, 1e-12)) visit(p);
    }
  } else {
    for (int i = 0; i < resolution; ++i) {
      p[0] = reg.lower[0] + (reg.upper[0] - reg.lower[0]) * (i / n);
      for (int j = 0; j < resolution; ++j) {
        p[1] = reg.lower[1] + (reg.upper[1] - reg.lower[1]) * (j / n);
        if (!reg.set || reg.set->contains(p, 1e-12)) visit(p);
      }
    }
  }
  if (!reg.set || reg.set->kind() == ConvexSet::Kind::Box) return;
  if (d == 1) {
    for (double s : {-1.0, 1.0}) visit(reg.set->boundary_point(Point::Constant(1, s)));
    return;
  }
  const int ring = 4 * resolution;
  for (int k = 0; k < ring; ++k) {
    const double a = 2.0 * M_PI * k / ring;
    Point u(2);
    u << std::cos(a), std::sin(a);
    visit(reg.set->boundary_point(u));
  }
}

}  // namespace

double brute_force_gap(const GamePayoff& payoff, const Point& x_bar, const Point& y_bar,
                       int resolution) {
  if (resolution < 2 || resolution > 2001) {
    throw ConfigError("brute_force_gap: resolution must lie in [2, 2001]");
  }
  if (payoff.dim_x > 2 || payoff.dim_y > 2) {
    throw UnsupportedOperation("brute_force_gap: dimension above 2");
  }
  const Region rx = region_of(payoff.set_x, payoff.search_x, "x");
  const Region ry = region_of(payoff.set_y, payoff.search_y, "y");
  double sup = -std::numeric_limits<double>::infinity();
  double inf = std::numeric_limits<double>::infinity();
  sweep(ry, resolution, [&](const Point& y) { sup = std::max(sup, payoff.g(x_bar, y)); });
  sweep(rx, resolution, [&](const Point& x) { inf = std::min(inf, payoff.g(x, y_bar)); });
  return std::max(sup - inf, 0.0);
}

}  // namespace fwgame
