#include "fwgame/fw.hpp"
#include "fwgame/harness.hpp"
#include "fwgame/rng.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace fwgame {
namespace {

Point P(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

FWInstance ball_instance(const Point& c, double r, const Point& y0) {
  return quadratic_instance(Matrix::Identity(2, 2), c, ConvexSet::l2_ball(r, 2), y0);
}

TEST(QuadraticInstance, MinimumOnBallMatchesSphereSearch) {
  CounterRng rng(12);
  for (int k = 0; k < 10; ++k) {
    Matrix A(2, 2);
    for (int i = 0; i < 4; ++i) A(i / 2, i % 2) = rng.normal();
    const Matrix H = A * A.transpose() + 0.3 * Matrix::Identity(2, 2);
    const Point c = P(rng.normal(), rng.normal()) * 2.0;
    const FWInstance inst = quadratic_instance(H, c, ConvexSet::l2_ball(1, 2), P(0, 0));
    ASSERT_TRUE(inst.f_min.has_value());
    double ref = inst.f.value(c);
    if (c.norm() > 1) {
      ref = inst.f.value(oracle::minimise_on_lp_sphere(inst.f.value, 2.0, 1.0));
    }
    EXPECT_NEAR(*inst.f_min, ref, 1e-9);
  }
}

TEST(ClassicFW, OneStepAndRate) {
  const FWInstance inst = ball_instance(P(0, 0), 1, P(0, 1));
  const auto rows = classic_fw(inst, 1);
  const Point v1 = inst.set.lin_opt(inst.f.gradient(inst.y0));
  EXPECT_TRUE(rows[0].point.isApprox(inst.y0 / 3 + 2 * v1 / 3, 1e-15));
  const auto long_run = classic_fw(inst, 500);
  for (const FWRow& row : long_run) {
    // 2 L D^2 / (t + 2) with L = 1, D = 2.
    EXPECT_LE(inst.error(row.point), 8.0 / (row.t + 2) + 1e-12);
  }
  EXPECT_LT(inst.error(long_run.back().point), 1e-2);
}

TEST(ClassicFW, LinearObjectiveHeadsToVertex) {
  // A flat quadratic approximates a linear objective; the vertex never moves.
  const FWInstance inst = quadratic_instance(1e-9 * Matrix::Identity(2, 2), P(3e9, 4e9),
                                             ConvexSet::l2_ball(1, 2), P(-1, 0));
  const auto rows = classic_fw(inst, 50);
  const Point vertex = P(0.6, 0.8);
  for (const FWRow& row : rows) {
    // w_t = (2 / ((t+1)(t+2))) y0 + (1 - that) v.
    const double keep = 2.0 / ((row.t + 1.0) * (row.t + 2.0));
    EXPECT_TRUE(row.point.isApprox(keep * inst.y0 + (1 - keep) * vertex, 1e-9));
  }
}

TEST(FWAsGame, RegretsAndEquivalence) {
  const FWInstance inst = ball_instance(P(0.4, -0.3), 1, P(-1, 0));
  const GameTrace tr = fw_as_game(inst, 100);
  EXPECT_LE(tr.regret_y, 1e-9 * tr.A_T);
  EXPECT_LE(tr.regret_x / tr.A_T, 8.0 * inst.f.L * 4.0 / 100);
  FWInstance shifted = inst;
  shifted.y0 = tr.ys.front();
  const auto classic = classic_fw(shifted, 99);
  Point s = Point::Zero(2);
  double a = 0.0;
  for (int t = 0; t < 100; ++t) {
    s += tr.alphas[t] * tr.ys[t];
    a += tr.alphas[t];
    if (t > 0) ASSERT_LE((s / a - classic[t - 1].point).norm(), 1e-9);
  }
}

TEST(NewFW, FirstRoundFormula) {
  const FWInstance inst = ball_instance(P(0.6, -0.8), 2, P(0.5, 0.5));
  const double eta = 0.3;
  const NewFWResult r = new_fw(inst, 1, eta);
  const Point x1 = inst.f.gradient(inst.y0);
  const Point yhat = inst.set.lin_opt(x1);
  const double rho = std::clamp(-0.5 * eta * x1.dot(yhat), 0.0, 1.0);
  EXPECT_TRUE(r.ys[0].isApprox(rho * yhat, 1e-15));
  EXPECT_EQ(r.lin_opt_calls, 1);
}

TEST(NewFW, DefaultStepAndCallCount) {
  const FWInstance inst = ball_instance(P(0.6, -0.8), 2, P(0, 0));
  // beta = 2 / r^2 = 0.5; 0.5 / (16 * 1 * 2).
  EXPECT_NEAR(new_fw_default_eta(inst), 0.015625, 1e-15);
  for (int T : {1, 7, 64, 300}) EXPECT_EQ(new_fw(inst, T).lin_opt_calls, T);
  const FWInstance boxed = quadratic_instance(Matrix::Identity(2, 2), P(0, 0),
                                              ConvexSet::box(P(-1, -1), P(1, 1)), P(0, 0));
  EXPECT_THROW(new_fw_default_eta(boxed), UnsupportedOperation);
}

TEST(NewFW, SameAsOptimisticGame) {
  const FWInstance inst = ball_instance(P(0.2, 0.9), 2, P(1, 0));
  const double eta = new_fw_default_eta(inst);
  const NewFWResult r = new_fw(inst, 200, eta);
  const GameTrace tr = run_game(fw_game_payoff(inst), new_fw_game_config(inst, 200, eta));
  for (int t = 0; t < 200; ++t) {
    ASSERT_LE((r.xs[t] - tr.xs[t]).norm(), 1e-12);
    ASSERT_LE((r.ys[t] - tr.ys[t]).norm(), 1e-12);
  }
}

TEST(NewFW, QuadraticRateOnInteriorOptimum) {
  const FWInstance inst = ball_instance(P(0.6, -0.8), 2, P(0, 0));
  const GamePayoff g = fw_game_payoff(inst);
  std::vector<std::pair<double, double>> series;
  for (int T = 64; T <= 4096; T *= 2) {
    series.emplace_back(T, run_game(g, new_fw_game_config(inst, T, new_fw_default_eta(inst))).gap);
  }
  const RateFit fit = fit_rate(series, RateModel::PowerLaw);
  EXPECT_LE(fit.slope_or_decay, -1.8);
  EXPECT_GE(fit.r_squared, 0.98);
}

TEST(LinearRateFW, WeightsAreInverseSquaredGradients) {
  const FWInstance inst = ball_instance(P(3, 1), 1, P(0, -1));
  const LinearRateResult r = linear_rate_fw(inst, 200);
  ASSERT_FALSE(r.alphas.empty());
  Point y_bar = inst.y0;
  Point s = Point::Zero(2);
  double A = 0.0;
  for (size_t i = 0; i < r.alphas.size(); ++i) {
    const Point x = inst.f.gradient(y_bar);
    const Point y = inst.set.lin_opt(x);
    const double expect = 1.0 / (y_bar - y).squaredNorm();
    EXPECT_NEAR(r.alphas[i], expect, 1e-12 * expect);
    s += r.alphas[i] * y;
    A += r.alphas[i];
    y_bar = s / A;
  }
  EXPECT_LE(inst.error(r.rows.back().point), 1e-8);
}

TEST(LinearRateFW, InteriorOptimumRaises) {
  const FWInstance inst = ball_instance(P(0.2, 0.1), 1, P(0, -1));
  EXPECT_THROW(linear_rate_fw(inst, 50), DegenerateGradientError);
  const FWInstance boxed = quadratic_instance(Matrix::Identity(2, 2), P(3, 3),
                                              ConvexSet::box(P(-1, -1), P(1, 1)), P(0, 0));
  EXPECT_THROW(linear_rate_fw(boxed, 50), UnsupportedOperation);
}

QuadraticBilinearParams scenario_one() {
  QuadraticBilinearParams prm;
  prm.M = Matrix(2, 2);
  prm.M << 1.0, 0.3, 0.2, 0.8;
  prm.sigma_x = 1.0;
  prm.sigma_y = 0.25;
  prm.x0 = P(2, 1);
  prm.y0 = P(-1, 0.3);
  prm.set_x = ConvexSet::l2_ball(3, 2);
  return prm;
}

TEST(SCAdaGradGame, SingleRoundAndStepSizes) {
  const GamePayoff g = quadratic_bilinear_payoff(scenario_one());
  const GameTrace one = sc_adagrad_game(g, 1, Point::Zero(2));
  EXPECT_NEAR(one.gap, equilibrium_gap(g, one.xs[0], one.ys[0]), 1e-15);
  const GameTrace tr = sc_adagrad_game(g, 60, Point::Zero(2));
  // theta_t = alpha_t sigma_x; the accumulated theta strictly increases, so
  // the step 1 / sum theta strictly decreases.
  double theta_sum = 0.0;
  double last_step = std::numeric_limits<double>::infinity();
  for (int t = 0; t < tr.rounds(); ++t) {
    EXPECT_GT(tr.alphas[t], 0.0);
    theta_sum += tr.alphas[t] * 1.0;
    EXPECT_LT(1.0 / theta_sum, last_step);
    last_step = 1.0 / theta_sum;
  }
}

TEST(SCAdaGradGame, LinearRateToSaddle) {
  const QuadraticBilinearParams prm = scenario_one();
  const auto saddle = quadratic_bilinear_saddle(prm);
  ASSERT_TRUE(saddle.has_value());
  const GamePayoff g = quadratic_bilinear_payoff(prm);
  const GameTrace tr = sc_adagrad_game(g, 300, Point::Zero(2));
  EXPECT_LE(tr.gap, 1e-6);
  EXPECT_LE((tr.x_bar - saddle->first).norm(), 1e-5);
  const auto gaps = prefix_gaps(tr, g);
  std::vector<std::pair<double, double>> series;
  for (size_t i = 0; i < gaps.size(); ++i) series.emplace_back(i + 1, gaps[i]);
  const RateFit fit = fit_rate(series, RateModel::Exponential);
  EXPECT_LT(fit.slope_or_decay, 0.0);
  EXPECT_GE(fit.r_squared, 0.95);
}

TEST(Scenarios, SmoothnessConstants) {
  QuadraticBilinearParams prm;
  prm.M = Matrix::Identity(2, 2);
  prm.sigma_x = 1.0;
  prm.sigma_y = 1.0;
  prm.x0 = P(0, 0);
  prm.y0 = P(0, 0);
  EXPECT_NEAR(scenario_payoff(1, {prm, std::nullopt}).s_smoothness, 2.0, 1e-12);
  EXPECT_NEAR(scenario_payoff(2, {prm, std::nullopt}).s_smoothness, 3.0, 1e-12);
  const FWInstance inst = ball_instance(P(1.5, 0), 1, P(-1, 0));
  EXPECT_NEAR(inst.constants.B, 0.5, 1e-12);
  EXPECT_NEAR(scenario_payoff(3, {std::nullopt, inst}).s_smoothness, 2.0, 1e-12);
  EXPECT_THROW(scenario_payoff(4, {prm, std::nullopt}), ConfigError);
}

}  // namespace
}  // namespace fwgame
