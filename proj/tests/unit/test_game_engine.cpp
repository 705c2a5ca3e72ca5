#include "fwgame/fw.hpp"
#include "fwgame/game_engine.hpp"
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

Point S(double a) {
  Point p(1);
  p << a;
  return p;
}

GamePayoff unit_bilinear() {
  const ConvexSet box = ConvexSet::box(S(-1), S(1));
  return bilinear_box_payoff(Matrix::Identity(1, 1), box, box);
}

FWInstance box_instance(std::uint64_t seed, int d) {
  CounterRng rng(seed);
  Matrix A(d, d);
  for (int i = 0; i < d * d; ++i) A(i / d, i % d) = rng.normal();
  const Matrix H = A * A.transpose() / d + 0.5 * Matrix::Identity(d, d);
  Point c(d);
  for (int i = 0; i < d; ++i) c[i] = 1.5 * rng.normal();
  const Point lo = -Point::Ones(d);
  return quadratic_instance(H, c, ConvexSet::box(lo, Point::Ones(d)), lo, "box");
}

TEST(RunGame, SingleRoundAverages) {
  const FWInstance inst = box_instance(1, 3);
  const GameTrace tr = fw_as_game(inst, 1);
  ASSERT_EQ(tr.rounds(), 1);
  EXPECT_TRUE(tr.x_bar.isApprox(tr.xs[0]));
  EXPECT_TRUE(tr.y_bar.isApprox(tr.ys[0]));
}

TEST(RunGame, BookkeepingLengths) {
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::FTL;
  cfg.learner_x.initial = S(0.5);
  cfg.learner_y.kind = LearnerKind::BestResponse;
  cfg.T = 37;
  const GameTrace tr = run_game(unit_bilinear(), cfg);
  EXPECT_EQ(tr.rounds(), 37);
  EXPECT_EQ(tr.xs.size(), 37u);
  EXPECT_EQ(tr.ys.size(), 37u);
  EXPECT_EQ(tr.losses_x.size(), 37u);
  EXPECT_EQ(tr.losses_y.size(), 37u);
  EXPECT_NEAR(tr.A_T, 37.0, 1e-12);
}

TEST(RunGame, FrankWolfeOnBoxMatchesPlainLoop) {
  const FWInstance inst = box_instance(2, 5);
  const int T = 200;
  const GameTrace tr = fw_as_game(inst, T);
  // Plain FW started from the first best response, one round behind.
  const auto ref = oracle::frank_wolfe(inst.f.gradient, [&](const Point& g) { return inst.set.lin_opt(g); },
                                       tr.ys[0], T - 1);
  Point s = Point::Zero(5);
  double a = 0.0;
  for (int t = 0; t < T; ++t) {
    s += tr.alphas[t] * tr.ys[t];
    a += tr.alphas[t];
    const Point w = t == 0 ? Point(tr.ys[0]) : ref[t - 1];
    ASSERT_LE((s / a - w).norm(), 1e-9) << "round " << t + 1;
  }
}

TEST(RunGame, AdaptiveWeightsNeedNonPrescientY) {
  const FWInstance inst = box_instance(3, 2);
  GameConfig cfg = fw_game_config(inst, 5);
  cfg.schedule.kind = WeightKind::AdaptiveInvGradSq;
  cfg.learner_y.kind = LearnerKind::BTRL;
  EXPECT_THROW(run_game(fw_game_payoff(inst), cfg), ConfigError);
}

TEST(EquilibriumGap, BilinearHandValues) {
  const GamePayoff g = unit_bilinear();
  EXPECT_NEAR(equilibrium_gap(g, S(0), S(0)), 0.0, 1e-15);
  EXPECT_NEAR(equilibrium_gap(g, S(1), S(0)), 1.0, 1e-15);
  EXPECT_NEAR(equilibrium_gap(g, S(0.5), S(-0.25)), 0.75, 1e-15);
}

TEST(EquilibriumGap, FWGameAtMinimiser) {
  // f = |y|^2 / 2 over the unit ball: y_bar = 0 and x_bar = grad f(0) = 0.
  const FWInstance inst = quadratic_instance(Matrix::Identity(2, 2), P(0, 0),
                                             ConvexSet::l2_ball(1, 2), P(0, 0));
  const GamePayoff g = fw_game_payoff(inst);
  EXPECT_NEAR(equilibrium_gap(g, P(0, 0), P(0, 0)), 0.0, 1e-15);
  ASSERT_TRUE(g.value.has_value());
  EXPECT_NEAR(*g.value, 0.0, 1e-15);
}

TEST(WeightedRegret, PrescientSideIsNonPositive) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const FWInstance inst = box_instance(seed, 3);
    const GameTrace tr = fw_as_game(inst, 100);
    EXPECT_LE(weighted_regret(tr, fw_game_payoff(inst), Side::Y), 1e-9 * tr.A_T);
  }
}

TEST(WeightedRegret, FTLSideMatchesRecomputation) {
  const FWInstance inst = box_instance(4, 3);
  const GamePayoff g = fw_game_payoff(inst);
  const GameTrace tr = fw_as_game(inst, 100);
  // Comparator of sum_t alpha_t (f*(x) - <x, y_t>) is grad f(y_bar); recompute
  // f* by Fenchel-Young at that point.
  double played = 0.0;
  for (int t = 0; t < tr.rounds(); ++t) played += tr.alphas[t] * g.g(tr.xs[t], tr.ys[t]);
  const Point ybar = weighted_average(tr.ys, tr.alphas);
  const Point xs = inst.f.gradient(ybar);
  const double fstar = xs.dot(ybar) - inst.f.value(ybar);
  double best = 0.0;
  for (int t = 0; t < tr.rounds(); ++t) best += tr.alphas[t] * (fstar - xs.dot(tr.ys[t]));
  EXPECT_NEAR(weighted_regret(tr, g, Side::X), played - best, 1e-10 * (1 + std::abs(played)));
}

TEST(WeightedRegret, SingleRoundAtComparatorIsZero) {
  // Starting at the boundary minimiser c/|c| makes y_1 = y_0, so x_1 = grad f(y_1)
  // is already the best response in hindsight.
  const Point c = P(3, 4);
  const FWInstance inst = quadratic_instance(Matrix::Identity(2, 2), c, ConvexSet::l2_ball(1, 2),
                                             c / c.norm());
  const GameTrace tr = fw_as_game(inst, 1);
  ASSERT_TRUE(tr.ys[0].isApprox(inst.y0, 1e-15));
  EXPECT_NEAR(weighted_regret(tr, fw_game_payoff(inst), Side::X), 0.0, 1e-14);
}

TEST(Sandwich, HoldsAcrossLearnerPairs) {
  const FWInstance inst = quadratic_instance(Matrix::Identity(2, 2), P(0.3, -0.4),
                                             ConvexSet::lp_ball(1.5, 1.2, 2), P(0, 0));
  const GamePayoff g = fw_game_payoff(inst);
  const std::vector<LearnerKind> ys = {LearnerKind::BestResponse, LearnerKind::BeTheLeader,
                                       LearnerKind::BTRL, LearnerKind::GaugeFTRL,
                                       LearnerKind::FTRL, LearnerKind::OptimisticFTRL, LearnerKind::FTL};
  for (LearnerKind ky : ys) {
    for (WeightKind w : {WeightKind::Uniform, WeightKind::Linear}) {
      GameConfig cfg = fw_game_config(inst, 60);
      cfg.learner_y.kind = ky;
      cfg.learner_y.initial = Point::Zero(2);
      cfg.schedule.kind = w;
      const GameTrace tr = run_game(g, cfg);
      EXPECT_TRUE(check_sandwich(tr, g)) << to_string(ky) << " " << to_string(w);
    }
  }
}

TEST(Sandwich, BilinearWithKnownValue) {
  const GamePayoff g = unit_bilinear();
  ASSERT_TRUE(g.value.has_value());
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::FTL;
  cfg.learner_x.initial = S(0.3);
  cfg.learner_y.kind = LearnerKind::FTL;
  cfg.learner_y.initial = S(-0.3);
  cfg.T = 50;
  const GameTrace tr = run_game(g, cfg);
  const SandwichReport rep = sandwich_report(tr, g);
  EXPECT_TRUE(rep.ok());
  EXPECT_LE(rep.lower, 1e-12);
  EXPECT_GE(rep.upper, -1e-12);
}

TEST(PrefixSeries, MatchQuadraticRecomputation) {
  const FWInstance inst = box_instance(5, 2);
  const GamePayoff g = fw_game_payoff(inst);
  const GameTrace tr = fw_as_game(inst, 40);
  const auto gaps = prefix_gaps(tr, g);
  const auto reg = prefix_regrets(tr, g);
  for (int n = 1; n <= tr.rounds(); n += 7) {
    GameTrace head = tr;
    head.xs.resize(n);
    head.ys.resize(n);
    head.alphas.resize(n);
    head.x_bar = weighted_average(head.xs, head.alphas);
    head.y_bar = weighted_average(head.ys, head.alphas);
    EXPECT_NEAR(gaps[n - 1], equilibrium_gap(g, head.x_bar, head.y_bar), 1e-10);
    head.A_T = 0.0;
    for (double a : head.alphas) head.A_T += a;
    EXPECT_NEAR(reg.x[n - 1], weighted_regret(head, g, Side::X), 1e-8);
    EXPECT_NEAR(reg.y[n - 1], weighted_regret(head, g, Side::Y), 1e-8);
  }
}

}  // namespace
}  // namespace fwgame
