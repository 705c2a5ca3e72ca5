#pragma once

#include "fwgame/core.hpp"
#include "fwgame/game_engine.hpp"
#include "fwgame/payoff.hpp"
#include "fwgame/sets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fwgame {

// Minimise a smooth f over a constraint set, starting from a feasible y0.
struct FWInstance {
  FWInstance(std::string name, SmoothObjective f, ConvexSet set, Point y0);

  std::string name;
  SmoothObjective f;
  ConvexSet set;
  Point y0;
  std::optional<double> f_min;
  std::optional<Point> y_star;
  GameConstants constants;

  double error(const Point& y) const;  // f(y) - f_min
};

// f(y) = 1/2 (y - c)^T H (y - c). Fills in f_min, y_star and the gradient
// lower bound B whenever a closed form exists.
FWInstance quadratic_instance(const Matrix& H, const Point& c, const ConvexSet& set,
                              const Point& y0, const std::string& name = "quadratic");

// g(x, y) = f*(x) - <x, y> with x in R^d and y in the instance set.
GamePayoff fw_game_payoff(const FWInstance& inst);

struct FWRow {
  int t = 0;
  Point point;  // iterate (classic FW) or weighted average
  double value = 0.0;
};

// w_t = (1 - 2/(t+2)) w_{t-1} + 2/(t+2) v_t with v_t = lin_opt(grad f(w_{t-1})).
std::vector<FWRow> classic_fw(const FWInstance& inst, int T);

// FTL x-player (x_1 = grad f(y0)) against a best-responding y-player, alpha_t = t.
GameConfig fw_game_config(const FWInstance& inst, int T);
GameTrace fw_as_game(const FWInstance& inst, int T);

struct NewFWResult {
  std::vector<int> t;
  std::vector<Point> xs;
  std::vector<Point> ys;
  std::vector<Point> y_bars;
  std::vector<double> values;  // f(y_bar_t)
  double eta = 0.0;
  long lin_opt_calls = 0;
};

// beta / (16 L (1 + L / sigma)).
double new_fw_default_eta(const FWInstance& inst);

// Accelerated variant: one linear optimisation per round with alpha_t = t.
NewFWResult new_fw(const FWInstance& inst, int T, std::optional<double> eta = std::nullopt);

// The same dynamics expressed through the game engine (optimistic FTL
// against regularised-leader with the squared gauge).
GameConfig new_fw_game_config(const FWInstance& inst, int T, double eta);

struct LinearRateResult {
  std::vector<FWRow> rows;       // weighted averages, one per completed round
  std::vector<double> alphas;    // |grad l_t(x_t)|^-2
  std::vector<double> grad_norms;
  std::optional<int> floor_round;  // round where the weight floor was reached
};

// Adaptive FTL x-player with alpha_t = |grad l_t(x_t)|^-2 against lin_opt
// best responses. Requires a strongly convex set and a declared B > 0 that is
// spot-checked before and during the run.
LinearRateResult linear_rate_fw(const FWInstance& inst, int T, double floor = 1e-10);

// SC-AdaGrad x-player on alpha_t-weighted losses against a best-responding
// y-player with alpha_t = |grad l_t(x_t)|^-2.
GameTrace sc_adagrad_game(const GamePayoff& payoff, int T,
                          std::optional<Point> x1 = std::nullopt, double floor = 1e-10);

struct ScenarioParams {
  std::optional<QuadraticBilinearParams> bilinear;  // kinds 1 and 2
  std::optional<FWInstance> fw;                     // kind 3
};

struct ScenarioPayoff {
  int kind = 0;
  GamePayoff payoff;
  double s_smoothness = 0.0;  // smoothness of s(x) = sup_y g(x, y)
};

ScenarioPayoff scenario_payoff(int kind, const ScenarioParams& params);

}  // namespace fwgame
