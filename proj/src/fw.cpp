#include "fwgame/fw.hpp"

#include "fwgame/rng.hpp"

#include <algorithm>
#include <cmath>

namespace fwgame {

namespace {

double max_corner_norm(const ConvexSet& s) {
  return std::max(s.bbox_lower().norm(), s.bbox_upper().norm());
}

// Minimiser of 1/2 (y - c)^T H (y - c) over |y| <= r for positive definite H.
Point l2_ball_quadratic_argmin(const Matrix& H, const Point& c, double r) {
  if (c.norm() <= r) return c;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const Matrix& V = eig.eigenvectors();
  const Point& lam = eig.eigenvalues();
  const Point hc = V.transpose() * (H * c);
  auto at = [&](double mu) -> Point {
    return V * hc.cwiseQuotient((lam.array() + mu).matrix());
  };
  double lo = 0.0;
  double hi = 1.0;
  while (at(hi).norm() > r) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (at(mid).norm() > r) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-17 * hi) break;
  }
  const Point y = at(hi);
  return y * (r / y.norm());
}

// Deterministic probe points of a set for the gradient lower-bound check.
std::vector<Point> probe_points(const ConvexSet& set, const Point& y0) {
  std::vector<Point> pts{Point::Zero(set.dim()), y0};
  for (int i = 0; i < set.dim(); ++i) {
    for (double s : {-1.0, 1.0}) {
      Point e = Point::Zero(set.dim());
      e[i] = s;
      pts.push_back(set.boundary_point(e));
    }
  }
  CounterRng rng(0x5eedULL);
  for (int k = 0; k < 128; ++k) {
    Point u(set.dim());
    for (int i = 0; i < set.dim(); ++i) u[i] = rng.normal();
    if (u.norm() == 0) continue;
    const Point b = set.boundary_point(u);
    pts.push_back(b);
    pts.push_back(std::pow(rng.uniform(), 1.0 / set.dim()) * b);
  }
  return pts;
}

void check_gradient_bound(const FWInstance& inst, const Point& y, double B, int round) {
  const double n = inst.f.gradient(y).norm();
  if (n < B * (1 - 1e-9)) {
    throw DegenerateGradientError(
        "gradient norm " + std::to_string(n) + " below declared B = " + std::to_string(B) +
            (round > 0 ? " at round " + std::to_string(round) : std::string(" on the set")) +
            "; the optimum is likely interior",
        round);
  }
}

}  // namespace

FWInstance::FWInstance(std::string name_, SmoothObjective f_, ConvexSet set_, Point y0_)
    : name(std::move(name_)), f(std::move(f_)), set(std::move(set_)), y0(std::move(y0_)) {
  if (y0.size() != set.dim()) throw DimensionError("FWInstance: y0 dimension");
  require_finite(y0, "FWInstance y0");
  if (!set.contains(y0, 1e-9)) throw DomainError("FWInstance: y0 outside the set");
  constants.L = f.sigma > 0 ? 1.0 / f.sigma : 1.0;
  constants.sigma_x = f.L > 0 ? 1.0 / f.L : 0.0;
  constants.D = set.diameter();
  constants.G = std::max(set.diameter(), 1e-12);
}

double FWInstance::error(const Point& y) const {
  if (!f_min) throw UnsupportedOperation("instance " + name + " has no known minimum");
  return f.value(y) - *f_min;
}

FWInstance quadratic_instance(const Matrix& H, const Point& c, const ConvexSet& set,
                              const Point& y0, const std::string& name) {
  FWInstance inst(name, quadratic_objective(H, c), set, y0);
  const bool diagonal = H.isDiagonal(0.0);
  std::optional<Point> ys;
  if (set.contains(c)) {
    ys = c;
  } else if (set.kind() == ConvexSet::Kind::L2Ball && inst.f.sigma > 0) {
    ys = l2_ball_quadratic_argmin(H, c, set.radius());
  } else if (set.kind() == ConvexSet::Kind::Box && diagonal) {
    ys = set.project(c);
  }
  if (ys) {
    inst.y_star = *ys;
    inst.f_min = inst.f.value(*ys);
  }
  // |H (y - c)| >= sigma |y - c| >= sigma dist(c, set).
  inst.constants.B = inst.f.sigma * (c - set.project(c)).norm();
  return inst;
}

GamePayoff fw_game_payoff(const FWInstance& inst) {
  if (!inst.f.conjugate_gradient) {
    throw UnsupportedOperation("FW game needs a strongly convex objective");
  }
  const SmoothObjective f = inst.f;
  const ConvexSet set = inst.set;
  GamePayoff P;
  P.name = "fw-game:" + inst.name;
  P.dim_x = set.dim();
  P.dim_y = set.dim();
  P.set_y = set;
  P.linear_in_y = true;
  P.cross_affine = true;
  P.g = [f](const Point& x, const Point& y) { return f.conjugate_value(x) - x.dot(y); };
  P.grad_x = [f](const Point& x, const Point& y) -> Point { return f.conjugate_gradient(x) - y; };
  P.grad_y = [](const Point& x, const Point&) -> Point { return -x; };
  P.best_response_x = [f](const Point& y) { return f.gradient(y); };
  P.best_response_y = [set](const Point& x) { return set.lin_opt(x); };
  P.argmin_weighted_x = [f](const std::vector<double>& w, const std::vector<Point>& ys) {
    return f.gradient(weighted_average(ys, w));
  };
  P.argmax_weighted_y = [set](const std::vector<double>& w, const std::vector<Point>& xs) {
    return set.lin_opt(weighted_average(xs, w));
  };
  P.constants = inst.constants;
  if (inst.f_min) P.value = -*inst.f_min;
  // grad f maps the set into a ball around grad f(0) of radius L R.
  const Point centre = f.gradient(Point::Zero(set.dim()));
  const double reach = f.L * max_corner_norm(set);
  P.search_x = SearchBox{centre.array() - reach, centre.array() + reach};
  return P;
}

std::vector<FWRow> classic_fw(const FWInstance& inst, int T) {
  if (T < 1) throw ConfigError("classic_fw: T must be >= 1");
  std::vector<FWRow> rows;
  rows.reserve(T);
  Point w = inst.y0;
  for (int t = 1; t <= T; ++t) {
    const Point v = inst.set.lin_opt(inst.f.gradient(w));
    const double eta = 2.0 / (t + 2.0);
    w = (1 - eta) * w + eta * v;
    rows.push_back({t, w, inst.f.value(w)});
  }
  return rows;
}

GameConfig fw_game_config(const FWInstance& inst, int T) {
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::FTL;
  cfg.learner_x.initial = inst.f.gradient(inst.y0);
  cfg.learner_y.kind = LearnerKind::BestResponse;
  cfg.schedule.kind = WeightKind::Linear;
  cfg.T = T;
  return cfg;
}

GameTrace fw_as_game(const FWInstance& inst, int T) {
  const GamePayoff payoff = fw_game_payoff(inst);
  return run_game(payoff, fw_game_config(inst, T));
}

double new_fw_default_eta(const FWInstance& inst) {
  if (!(inst.set.beta() > 0)) {
    throw UnsupportedOperation("new_fw: set " + inst.set.describe() + " is not beta-gauge");
  }
  if (!(inst.f.sigma > 0)) throw UnsupportedOperation("new_fw: objective is not strongly convex");
  const double L = inst.f.L;
  return inst.set.beta() / (16.0 * L * (1.0 + L / inst.f.sigma));
}

NewFWResult new_fw(const FWInstance& inst, int T, std::optional<double> eta) {
  if (T < 1) throw ConfigError("new_fw: T must be >= 1");
  NewFWResult out;
  out.eta = new_fw_default_eta(inst);
  if (eta) {
    if (!(*eta > 0)) throw DomainError("new_fw: eta must be positive");
    out.eta = *eta;
  }
  auto lin_opt = [&](const Point& c) {
    ++out.lin_opt_calls;
    return inst.set.lin_opt(c);
  };

  const int d = inst.set.dim();
  Point y_sum = Point::Zero(d);   // sum_s alpha_s y_s
  Point x_sum = Point::Zero(d);   // sum_s alpha_s x_s
  Point y_last = Point::Zero(d);
  double A = 0.0;
  for (int t = 1; t <= T; ++t) {
    const double alpha = t;
    const double A_t = A + alpha;
    // The last point carries weight alpha_{t-1} + alpha_t.
    const Point x = t == 1 ? inst.f.gradient(inst.y0)
                           : inst.f.gradient((y_sum + alpha * y_last) / A_t);
    x_sum += alpha * x;
    const Point y_hat = lin_opt(x_sum);
    const double rho = std::clamp(-0.5 * out.eta * x_sum.dot(y_hat), 0.0, 1.0);
    const Point y = rho > 0 ? Point(rho * y_hat) : Point::Zero(d);
    y_sum += alpha * y;
    A = A_t;
    y_last = y;
    const Point y_bar = y_sum / A;
    out.t.push_back(t);
    out.xs.push_back(x);
    out.ys.push_back(y);
    out.y_bars.push_back(y_bar);
    out.values.push_back(inst.f.value(y_bar));
  }
  return out;
}

GameConfig new_fw_game_config(const FWInstance& inst, int T, double eta) {
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::OptimisticFTL;
  cfg.learner_x.initial = inst.f.gradient(inst.y0);
  cfg.learner_y.kind = LearnerKind::BTRL;
  cfg.learner_y.regularizer = Regularizer::SquaredGauge;
  cfg.learner_y.eta = eta;
  cfg.schedule.kind = WeightKind::Linear;
  cfg.T = T;
  return cfg;
}

LinearRateResult linear_rate_fw(const FWInstance& inst, int T, double floor) {
  if (T < 1) throw ConfigError("linear_rate_fw: T must be >= 1");
  if (!(inst.set.lambda() > 0)) {
    throw UnsupportedOperation("linear_rate_fw: set " + inst.set.describe() +
                               " is not strongly convex");
  }
  const double B = inst.constants.B;
  if (!(B > 0)) {
    throw DegenerateGradientError(
        "linear_rate_fw: instance declares no positive lower bound B on |grad f|");
  }
  for (const Point& y : probe_points(inst.set, inst.y0)) check_gradient_bound(inst, y, B, 0);

  const WeightSchedule schedule{WeightKind::AdaptiveInvGradSq, floor};
  LinearRateResult out;
  const int d = inst.set.dim();
  Point y_sum = Point::Zero(d);
  double A = 0.0;
  Point y_bar = inst.y0;  // grad f*(x_t) for the current x_t
  for (int t = 1; t <= T; ++t) {
    check_gradient_bound(inst, y_bar, B, t);
    const Point x = inst.f.gradient(y_bar);
    const Point y = inst.set.lin_opt(x);
    const Point grad = y_bar - y;
    double alpha = 0.0;
    try {
      alpha = emit_weight(schedule, t, &grad);
    } catch (const DegenerateGradientError&) {
      // After round one this means the averages have converged to the
      // working precision; further rounds would not move them.
      if (t == 1) throw;
      out.floor_round = t;
      break;
    }
    y_sum += alpha * y;
    A += alpha;
    y_bar = y_sum / A;
    out.alphas.push_back(alpha);
    out.grad_norms.push_back(grad.norm());
    out.rows.push_back({t, y_bar, inst.f.value(y_bar)});
  }
  return out;
}

GameTrace sc_adagrad_game(const GamePayoff& payoff, int T, std::optional<Point> x1,
                          double floor) {
  if (!(payoff.constants.sigma_x > 0)) {
    throw ConfigError("sc_adagrad_game: payoff is not strongly convex in x");
  }
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::SCAdaGrad;
  cfg.learner_x.initial = x1;
  cfg.learner_y.kind = LearnerKind::BestResponse;
  cfg.schedule = WeightSchedule{WeightKind::AdaptiveInvGradSq, floor};
  cfg.T = T;
  cfg.halt_at_weight_floor = true;
  return run_game(payoff, cfg);
}

ScenarioPayoff scenario_payoff(int kind, const ScenarioParams& params) {
  ScenarioPayoff out;
  out.kind = kind;
  switch (kind) {
    case 1: {
      if (!params.bilinear) throw ConfigError("scenario 1 needs quadratic-bilinear parameters");
      const auto& prm = *params.bilinear;
      if (!(prm.sigma_x > 0) || !(prm.sigma_y > 0)) {
        throw ConfigError("scenario 1 needs sigma_x > 0 and sigma_y > 0");
      }
      out.payoff = quadratic_bilinear_payoff(prm);
      const double m = Eigen::JacobiSVD<Matrix>(prm.M).singularValues()(0);
      out.s_smoothness = m * m / prm.sigma_y + prm.sigma_x;
      break;
    }
    case 2: {
      if (!params.bilinear) throw ConfigError("scenario 2 needs quadratic-bilinear parameters");
      const auto& prm = *params.bilinear;
      if (!(prm.sigma_y > 0)) throw ConfigError("scenario 2 needs sigma_y > 0");
      if (prm.set_y) throw ConfigError("scenario 2 needs interior best responses (no y set)");
      out.payoff = quadratic_bilinear_payoff(prm);
      const double m = Eigen::JacobiSVD<Matrix>(prm.M).singularValues()(0);
      const double L = std::max(prm.sigma_x, m);
      out.s_smoothness = L * (1.0 + 2.0 * L / prm.sigma_y);
      break;
    }
    case 3: {
      if (!params.fw) throw ConfigError("scenario 3 needs an FW instance");
      const FWInstance& inst = *params.fw;
      if (!(inst.constants.B > 0)) throw ConfigError("scenario 3 needs B > 0");
      if (!(inst.set.lambda() > 0)) throw ConfigError("scenario 3 needs a strongly convex set");
      out.payoff = fw_game_payoff(inst);
      out.s_smoothness = 1.0 / (inst.set.lambda() * inst.constants.B);
      break;
    }
    default:
      throw ConfigError("scenario kind must be 1, 2 or 3");
  }
  return out;
}

}  // namespace fwgame
