#pragma once

#include "fwgame/core.hpp"

#include <string>

namespace fwgame {

// Origin-centred constraint sets. Shifted sets are modelled by shifting the
// objective instead.
class ConvexSet {
 public:
  enum class Kind { LpBall, L2Ball, Box };

  static ConvexSet lp_ball(double p, double r, int dim);
  static ConvexSet l2_ball(double r, int dim);
  static ConvexSet box(const Point& lower, const Point& upper);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double p() const { return p_; }
  double radius() const { return r_; }
  const Point& lower() const { return lower_; }
  const Point& upper() const { return upper_; }

  // Strong convexity of the set and of the squared gauge.
  double lambda() const;
  double beta() const;
  bool contains_origin() const;
  bool origin_interior() const;
  double diameter() const;

  bool contains(const Point& x, double tol = 1e-12) const;
  double gauge(const Point& x) const;
  // argmin over the set of <c, x>. Ties at c = 0 resolve to r e_1 for balls
  // and to the lower corner for boxes.
  Point lin_opt(const Point& c) const;
  Point project(const Point& x) const;
  // Radial map of a nonzero direction onto the boundary.
  Point boundary_point(const Point& u) const;
  // Axis-aligned bounding box, used by grid oracles.
  Point bbox_lower() const;
  Point bbox_upper() const;

  std::string describe() const;

 private:
  ConvexSet() = default;
  void check_dim(const Point& x, const char* what) const;
  double lp_norm(const Point& x) const;
  Point project_lp(const Point& x) const;

  Kind kind_ = Kind::L2Ball;
  int dim_ = 0;
  double p_ = 2.0;
  double r_ = 1.0;
  Point lower_;
  Point upper_;
};

// Checks |x_p - x_q| <= 2|p - q| / (lambda (|p| + |q|)) for the maximisers
// x_p, x_q of <p, .> and <q, .> over the set, with 1e-9 slack.
bool strongly_convex_br_lipschitz_check(const ConvexSet& set, const Point& p,
                                        const Point& q);

// Left and right sides of the same inequality.
std::pair<double, double> strongly_convex_br_lipschitz_sides(const ConvexSet& set,
                                                             const Point& p,
                                                             const Point& q);

}  // namespace fwgame
