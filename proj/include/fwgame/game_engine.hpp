#pragma once

#include "fwgame/core.hpp"
#include "fwgame/learners.hpp"
#include "fwgame/payoff.hpp"

#include <optional>
#include <vector>

namespace fwgame {

struct GameConfig {
  LearnerSpec learner_x;
  LearnerSpec learner_y;
  WeightSchedule schedule;
  int T = 1;
  // With an adaptive schedule, stop when the weight floor is hit after round
  // one instead of raising. The averages keep their last values.
  bool halt_at_weight_floor = false;
};

// x-player moves first, a prescient y-player sees x_t; both observe alpha_t
// at the end of the round.
GameTrace run_game(const GamePayoff& payoff, const GameConfig& config);

// sup_y g(x_bar, y) - inf_x g(x, y_bar), clamped at zero within 1e-9.
double equilibrium_gap(const GamePayoff& payoff, const Point& x_bar, const Point& y_bar);

// Weighted regret of one side over the whole trace.
double weighted_regret(const GameTrace& trace, const GamePayoff& payoff, Side side);

struct SandwichReport {
  double gap = 0.0;
  double epsilon = 0.0;  // (regret_x + regret_y) / A_T
  bool certificate = false;
  std::optional<double> value;
  double lower = 0.0;  // inf_x g(x, y_bar)
  double upper = 0.0;  // sup_y g(x_bar, y)
  bool ordering = true;

  bool ok() const { return certificate && ordering; }
};

SandwichReport sandwich_report(const GameTrace& trace, const GamePayoff& payoff,
                               double tol = 1e-7);
bool check_sandwich(const GameTrace& trace, const GamePayoff& payoff);

// Equilibrium gap of the weighted averages after each round.
std::vector<double> prefix_gaps(const GameTrace& trace, const GamePayoff& payoff);

struct PrefixRegrets {
  std::vector<double> x;
  std::vector<double> y;
};

// Weighted regrets of both sides after each round.
PrefixRegrets prefix_regrets(const GameTrace& trace, const GamePayoff& payoff);

}  // namespace fwgame
