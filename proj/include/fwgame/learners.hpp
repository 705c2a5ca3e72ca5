#pragma once

#include "fwgame/core.hpp"
#include "fwgame/payoff.hpp"
#include "fwgame/sets.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fwgame {

enum class LearnerKind {
  FTL,
  FTRL,
  GaugeFTRL,
  OptimisticFTL,
  OptimisticFTRL,
  BestResponse,
  BeTheLeader,
  BTRL,
  SCAdaGrad,
  SCAFTL,
};

enum class Regularizer { SquaredL2, SquaredGauge };

enum class Side { X, Y };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);
bool is_prescient(LearnerKind kind);
bool uses_linear_losses(LearnerKind kind);

struct LearnerState {
  LearnerKind kind = LearnerKind::FTL;
  Point cumulative_loss;  // sum_s alpha_s l_s for linear-loss learners
  std::vector<double> history_weights;
  std::vector<Point> history;  // loss descriptors (opponent points in a game)
  double eta = 1.0;
  double theta_sum = 0.0;
  Point current;
  bool prescient = false;

  static LearnerState make(LearnerKind kind, int dim, double eta = 1.0);
};

// argmin over the set of eta <L, x> + R(x) for the accumulated linear loss L.
Point ftrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg, double eta);

// rho z* with z* = lin_opt(L) and rho = clamp(-(eta/2) <L, z*>, 0, 1).
Point gauge_ftrl_step(const LearnerState& state, const ConvexSet& set, double eta);

Point ftl_step(const LearnerState& state, const WeightedOracle& argmin_oracle);

// FTL with the last loss counted again at weight hint_weight.
Point optimistic_ftl_step(const LearnerState& state, const WeightedOracle& argmin_oracle,
                          double hint_weight);

Point best_response_step(const GamePayoff& payoff, const Point& opponent, Side side);

// Regularised leader including the current-round (weighted) loss vector.
Point btrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg, double eta,
                const Point& current_loss);

// theta_sum += theta_t, then a projected step of size 1 / theta_sum.
// A null set means no projection.
Point sc_adagrad_step(LearnerState& state, const Point& grad, double theta_t,
                      const ConvexSet* set);

// Records alpha_t = |grad|^-2 for the given loss, then plays the weighted leader.
Point sc_aftl_step(LearnerState& state, const WeightedOracle& argmin_oracle,
                   const Point& grad_for_weight, const Point& loss_descriptor,
                   double floor = 1e-10);

Point optimistic_ftrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg,
                           double eta, const Point& hint);

struct LearnerSpec {
  LearnerKind kind = LearnerKind::FTL;
  Regularizer regularizer = Regularizer::SquaredGauge;
  double eta = 1.0;
  // Round-one action for leader-type learners and the start of SC-AdaGrad.
  std::optional<Point> initial;
};

// A learner bound to one side of a game.
class Learner {
 public:
  Learner(LearnerSpec spec, Side side, const GamePayoff& payoff);

  bool prescient() const { return state_.prescient; }
  // `alpha_now` is the current round's weight when the schedule knows it in
  // advance; `opponent_now` is only passed to prescient learners.
  Point act(int t, const std::optional<double>& alpha_now, const Point* opponent_now);
  void observe(double alpha, const Point& own, const Point& opponent);

  const LearnerState& state() const { return state_; }
  const LearnerSpec& spec() const { return spec_; }

 private:
  // Linear loss vector of this side against `opponent`.
  Point loss_vector(const Point& opponent) const;
  const ConvexSet& own_set() const;
  WeightedOracle oracle() const;

  LearnerSpec spec_;
  Side side_;
  const GamePayoff& payoff_;
  LearnerState state_;
  std::optional<Point> last_loss_;
};

}  // namespace fwgame
