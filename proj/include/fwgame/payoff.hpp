#pragma once

#include "fwgame/core.hpp"
#include "fwgame/sets.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fwgame {

// Minimiser (or maximiser) of sum_s w_s g(., opp_s) given weights and the
// opponent's history.
using WeightedOracle =
    std::function<Point(const std::vector<double>&, const std::vector<Point>&)>;

struct SearchBox {
  Point lower;
  Point upper;
};

// Convex-concave g(x, y); x minimises, y maximises.
struct GamePayoff {
  std::string name;
  int dim_x = 0;
  int dim_y = 0;
  std::function<double(const Point&, const Point&)> g;
  std::function<Point(const Point&, const Point&)> grad_x;
  std::function<Point(const Point&, const Point&)> grad_y;
  std::function<Point(const Point&)> best_response_x;  // argmin_x g(., y)
  std::function<Point(const Point&)> best_response_y;  // argmax_y g(x, .)
  WeightedOracle argmin_weighted_x;
  WeightedOracle argmax_weighted_y;
  GameConstants constants;
  std::optional<double> value;  // V* when known in closed form
  std::optional<ConvexSet> set_x;  // empty means all of R^d
  std::optional<ConvexSet> set_y;
  // Regions that contain the relevant best responses on unconstrained sides.
  std::optional<SearchBox> search_x;
  std::optional<SearchBox> search_y;
  bool linear_in_x = false;
  bool linear_in_y = false;
  // g(x, y) - g(x', y) is affine in y and g(x, y) - g(x, y') is affine in x.
  // Lets prefix regrets be accumulated in O(1) per round.
  bool cross_affine = false;
};

struct GameTrace {
  std::vector<Point> xs;
  std::vector<Point> ys;
  std::vector<double> alphas;
  double A_T = 0.0;
  Point x_bar;
  Point y_bar;
  std::vector<double> losses_x;  // g(x_t, y_t)
  std::vector<double> losses_y;  // -g(x_t, y_t)
  double regret_x = 0.0;
  double regret_y = 0.0;
  double gap = 0.0;
  int T = 0;  // requested horizon
  // First round whose adaptive weight hit the floor; the run stops there and
  // the averages keep their last values.
  std::optional<int> floor_round;

  int rounds() const { return static_cast<int>(alphas.size()); }
};

// g = sx/2 |x - x0|^2 + x^T M y - sy/2 |y - y0|^2 with optional ball/box sets.
struct QuadraticBilinearParams {
  Matrix M;
  double sigma_x = 1.0;
  double sigma_y = 1.0;
  Point x0;
  Point y0;
  std::optional<ConvexSet> set_x;
  std::optional<ConvexSet> set_y;
};

GamePayoff quadratic_bilinear_payoff(const QuadraticBilinearParams& params);

// g = x^T M y over two boxes. Flat best responses pick the upper bound.
GamePayoff bilinear_box_payoff(const Matrix& M, const ConvexSet& box_x,
                               const ConvexSet& box_y);

// Closed-form saddle point of the quadratic-bilinear game when both sides are
// unconstrained or the saddle lies inside the sets.
std::optional<std::pair<Point, Point>> quadratic_bilinear_saddle(
    const QuadraticBilinearParams& params);

// Fallback minimiser for convex functions over 1-D or 2-D sets: nested
// golden-section search to the given tolerance.
Point golden_section_argmin(const std::function<double(const Point&)>& f,
                            const ConvexSet& set, double tol = 1e-10);

}  // namespace fwgame
