#include "fwgame/fw.hpp"
#include "fwgame/learners.hpp"
#include "fwgame/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fwgame {
namespace {

Point P(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

LearnerState with_loss(LearnerKind kind, const Point& L) {
  LearnerState s = LearnerState::make(kind, static_cast<int>(L.size()));
  s.cumulative_loss = L;
  return s;
}

// eta <L, x> + gauge(x)^2 minimised on a 1e-3 grid of the set.
double gauge_objective_grid_min(const ConvexSet& set, const Point& L, double eta) {
  const auto obj = [&](const Point& z) {
    const double g = set.gauge(z);
    return eta * L.dot(z) + g * g;
  };
  return oracle::grid_min_2d(obj, [&](const Point& z) { return set.contains(z); }, -1.0, 1.0, 1e-3);
}

FWInstance shifted_quadratic(const Point& y0_centre) {
  // f(y) = 1/2 |y - c|^2 over a ball that contains every test point.
  return quadratic_instance(Matrix::Identity(2, 2), y0_centre, ConvexSet::l2_ball(5.0, 2),
                            Point::Zero(2));
}

TEST(FTRL, SquaredL2Projection) {
  const ConvexSet ball = ConvexSet::l2_ball(1, 2);
  EXPECT_TRUE(ftrl_step(with_loss(LearnerKind::FTRL, P(4, 0)), ball, Regularizer::SquaredL2, 1)
                  .isApprox(P(-1, 0), 1e-15));
  EXPECT_TRUE(ftrl_step(with_loss(LearnerKind::FTRL, P(1, 0)), ball, Regularizer::SquaredL2, 1)
                  .isApprox(P(-0.5, 0), 1e-15));
  EXPECT_EQ(ftrl_step(with_loss(LearnerKind::FTRL, P(0, 0)), ball, Regularizer::SquaredL2, 1).norm(), 0.0);
}

TEST(GaugeFTRL, HandExamplesAgreeWithGrid) {
  const ConvexSet ball = ConvexSet::l2_ball(1, 2);
  const Point a = gauge_ftrl_step(with_loss(LearnerKind::GaugeFTRL, P(3, 0)), ball, 1);
  const Point b = gauge_ftrl_step(with_loss(LearnerKind::GaugeFTRL, P(1, 0)), ball, 1);
  EXPECT_TRUE(a.isApprox(P(-1, 0), 1e-15));
  EXPECT_TRUE(b.isApprox(P(-0.5, 0), 1e-15));
  EXPECT_EQ(gauge_ftrl_step(with_loss(LearnerKind::GaugeFTRL, P(0, 0)), ball, 1).norm(), 0.0);
  // Objective values -2 and -0.25 against the grid minimum.
  EXPECT_NEAR(gauge_objective_grid_min(ball, P(3, 0), 1), -2.0, 1e-3);
  EXPECT_NEAR(gauge_objective_grid_min(ball, P(1, 0), 1), -0.25, 1e-3);
}

TEST(GaugeFTRL, RandomLossesOnLpBallAgainstGrid) {
  CounterRng rng(9);
  const ConvexSet set = ConvexSet::lp_ball(1.5, 1, 2);
  for (int k = 0; k < 4; ++k) {
    const Point L = P(rng.normal(), rng.normal()) * 1.5;
    const Point x = gauge_ftrl_step(with_loss(LearnerKind::GaugeFTRL, L), set, 1);
    const double g = set.gauge(x);
    const double val = L.dot(x) + g * g;
    const double grid = gauge_objective_grid_min(set, L, 1);
    EXPECT_LE(val, grid + 1e-12);
    EXPECT_NEAR(val, grid, 2e-3);
  }
}

TEST(GaugeFTRL, RequiresInteriorOrigin) {
  const ConvexSet box = ConvexSet::box(P(0, 0), P(1, 1));
  EXPECT_THROW(gauge_ftrl_step(with_loss(LearnerKind::GaugeFTRL, P(1, 0)), box, 1), UnsupportedOperation);
}

TEST(FTL, QuadraticLossesGiveWeightedMeans) {
  LearnerState s = LearnerState::make(LearnerKind::FTL, 2);
  const WeightedOracle mean = [](const std::vector<double>& w, const std::vector<Point>& h) {
    return weighted_average(h, w);
  };
  s.history = {P(1, 2)};
  s.history_weights = {3.0};
  EXPECT_TRUE(ftl_step(s, mean).isApprox(P(1, 2), 1e-15));
  s.history.push_back(P(3, -2));
  s.history_weights.back() = 1.0;
  s.history_weights.push_back(1.0);
  EXPECT_TRUE(ftl_step(s, mean).isApprox(P(2, 0), 1e-15));
  // A hint equal to the last loss doubles its weight.
  EXPECT_TRUE(optimistic_ftl_step(s, mean, 1.0).isApprox(P(7.0 / 3, -2.0 / 3), 1e-14));
}

TEST(FTL, FWGameOracleMatchesNumericArgmin) {
  const Point c = P(0.4, -0.7);
  const FWInstance inst = shifted_quadratic(c);
  const GamePayoff g = fw_game_payoff(inst);
  const Point y1 = P(0.9, 0.2);
  const Point y2 = P(-0.3, 1.1);
  // x_2 = grad f(y_1) = y_1 - c.
  EXPECT_TRUE(g.argmin_weighted_x({2.5}, {y1}).isApprox(y1 - c, 1e-14));
  const std::vector<double> w = {1.0, 5.0};
  const Point direct = oracle::numeric_argmin(
      [&](const Point& x) {
        // f*(x) = |x|^2 / 2 + <x, c> for f = |y - c|^2 / 2.
        double s = 0.0;
        for (int i = 0; i < 2; ++i) {
          const Point& y = i == 0 ? y1 : y2;
          s += w[i] * (0.5 * x.squaredNorm() + x.dot(c) - x.dot(y));
        }
        return s;
      },
      Point::Zero(2), 0.1);
  // alpha_t = t with a hint on round 3: weights (1, 2 + 3).
  EXPECT_TRUE(g.argmin_weighted_x(w, {y1, y2}).isApprox(direct, 1e-7));
  EXPECT_TRUE(g.argmin_weighted_x(w, {y1, y2}).isApprox((y1 + 5 * y2) / 6 - c, 1e-14));
}

TEST(BestResponse, FWGameAndBilinear) {
  const FWInstance inst = quadratic_instance(Matrix::Identity(2, 2), P(0.1, 0.1),
                                             ConvexSet::l2_ball(1, 2), P(0, 0));
  const GamePayoff fw = fw_game_payoff(inst);
  EXPECT_TRUE(best_response_step(fw, P(0, 2), Side::Y).isApprox(P(0, -1), 1e-15));

  Point lo(1);
  Point hi(1);
  lo << -1;
  hi << 1;
  const ConvexSet box = ConvexSet::box(lo, hi);
  const GamePayoff bil = bilinear_box_payoff(Matrix::Identity(1, 1), box, box);
  Point one(1);
  one << 1;
  EXPECT_DOUBLE_EQ(best_response_step(bil, one, Side::X)[0], -1.0);
  EXPECT_DOUBLE_EQ(best_response_step(bil, Point::Zero(1), Side::Y)[0], 1.0);
}

TEST(BTRL, SquaredGaugeExamples) {
  const ConvexSet ball = ConvexSet::l2_ball(1, 2);
  LearnerState s = with_loss(LearnerKind::BTRL, P(1, 0));
  EXPECT_TRUE(btrl_step(s, ball, Regularizer::SquaredGauge, 1, P(2, 0)).isApprox(P(-1, 0), 1e-15));
  EXPECT_EQ(btrl_step(with_loss(LearnerKind::BTRL, P(0, 0)), ball, Regularizer::SquaredGauge, 1, P(0, 0)).norm(), 0.0);
  EXPECT_TRUE(btrl_step(with_loss(LearnerKind::BTRL, P(0, 0)), ball, Regularizer::SquaredGauge, 1, P(1, 0))
                  .isApprox(P(-0.5, 0), 1e-15));
  // The state itself is untouched.
  EXPECT_TRUE(s.cumulative_loss.isApprox(P(1, 0)));
}

TEST(OptimisticFTRL, Reductions) {
  CounterRng rng(10);
  const ConvexSet set = ConvexSet::lp_ball(1.5, 1.2, 2);
  for (int k = 0; k < 20; ++k) {
    const LearnerState s = with_loss(LearnerKind::OptimisticFTRL, P(rng.normal(), rng.normal()));
    const Point hint = P(rng.normal(), rng.normal());
    for (Regularizer reg : {Regularizer::SquaredL2, Regularizer::SquaredGauge}) {
      EXPECT_TRUE(optimistic_ftrl_step(s, set, reg, 0.7, Point::Zero(2))
                      .isApprox(ftrl_step(s, set, reg, 0.7), 1e-15));
      EXPECT_TRUE(optimistic_ftrl_step(s, set, reg, 0.7, hint)
                      .isApprox(btrl_step(s, set, reg, 0.7, hint), 1e-15));
    }
  }
  const LearnerState s = with_loss(LearnerKind::OptimisticFTRL, P(1, 0));
  EXPECT_TRUE(optimistic_ftrl_step(s, ConvexSet::l2_ball(1, 2), Regularizer::SquaredGauge, 1, P(2, 0))
                  .isApprox(P(-1, 0), 1e-15));
}

TEST(SCAdaGrad, StepSizesAndProjection) {
  const ConvexSet big = ConvexSet::l2_ball(2, 2);
  LearnerState s = LearnerState::make(LearnerKind::SCAdaGrad, 2);
  EXPECT_TRUE(sc_adagrad_step(s, P(1, 0), 1.0, &big).isApprox(P(-1, 0), 1e-15));
  EXPECT_TRUE(sc_adagrad_step(s, P(1, 0), 1.0, &big).isApprox(P(-1.5, 0), 1e-15));
  EXPECT_DOUBLE_EQ(s.theta_sum, 2.0);

  const ConvexSet unit = ConvexSet::l2_ball(1, 2);
  LearnerState u = LearnerState::make(LearnerKind::SCAdaGrad, 2);
  u.current = P(0.9, 0);
  EXPECT_TRUE(sc_adagrad_step(u, P(-0.3, 0), 1.0, &unit).isApprox(P(1, 0), 1e-15));
  EXPECT_THROW(sc_adagrad_step(u, P(1, 0), 0.0, &unit), DomainError);
}

TEST(SCAFTL, AdaptiveWeightsAndFloor) {
  const Point c = P(0.2, 0.1);
  const GamePayoff g = fw_game_payoff(shifted_quadratic(c));
  LearnerState s = LearnerState::make(LearnerKind::SCAFTL, 2);
  const Point y1 = P(1, 0);
  const Point y2 = P(0, 1);
  EXPECT_TRUE(sc_aftl_step(s, g.argmin_weighted_x, P(0.6, 0.8), y1).isApprox(y1 - c, 1e-14));
  const Point x3 = sc_aftl_step(s, g.argmin_weighted_x, P(0, 2), y2);
  EXPECT_DOUBLE_EQ(s.history_weights[0], 1.0);
  EXPECT_DOUBLE_EQ(s.history_weights[1], 0.25);
  EXPECT_TRUE(x3.isApprox((1.0 * y1 + 0.25 * y2) / 1.25 - c, 1e-14));
  EXPECT_THROW(sc_aftl_step(s, g.argmin_weighted_x, P(1e-12, 0), y1, 1e-10), DegenerateGradientError);
}

TEST(Learner, ConfigurationErrors) {
  const FWInstance inst = shifted_quadratic(P(0.1, 0.2));
  const GamePayoff g = fw_game_payoff(inst);
  EXPECT_THROW(Learner({LearnerKind::BestResponse}, Side::X, g), ConfigError);
  EXPECT_THROW(Learner({LearnerKind::GaugeFTRL}, Side::X, g), UnsupportedOperation);
  EXPECT_NO_THROW(Learner({LearnerKind::GaugeFTRL}, Side::Y, g));
  EXPECT_EQ(learner_kind_from_string("optimistic-ftl"), LearnerKind::OptimisticFTL);
  EXPECT_EQ(to_string(LearnerKind::SCAdaGrad), "sc-adagrad");
  EXPECT_THROW(learner_kind_from_string("adam"), ConfigError);
}

}  // namespace
}  // namespace fwgame
