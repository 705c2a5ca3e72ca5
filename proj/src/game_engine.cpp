#include "fwgame/game_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fwgame {

namespace {

std::string at_round(int t, const char* what) {
  return "round " + std::to_string(t) + ": " + what;
}

[[noreturn]] void rethrow_at_round(int t) {
  try {
    throw;
  } catch (const DegenerateGradientError& e) {
    throw DegenerateGradientError(at_round(t, e.what()), t);
  } catch (const DimensionError& e) {
    throw DimensionError(at_round(t, e.what()));
  } catch (const DomainError& e) {
    throw DomainError(at_round(t, e.what()));
  } catch (const UnsupportedOperation& e) {
    throw UnsupportedOperation(at_round(t, e.what()));
  } catch (const ConfigError& e) {
    throw ConfigError(at_round(t, e.what()));
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(at_round(t, e.what()));
  }
}

double clamp_gap(double upper, double lower) {
  const double gap = upper - lower;
  const double slack = 1e-9 * std::max({1.0, std::abs(upper), std::abs(lower)});
  if (gap < -slack) {
    throw ConsistencyError("negative equilibrium gap " + std::to_string(gap) +
                           "; a best-response oracle is not exact");
  }
  return std::max(gap, 0.0);
}

}  // namespace

GameTrace run_game(const GamePayoff& payoff, const GameConfig& config) {
  if (config.T < 1) throw ConfigError("run_game: T must be >= 1");
  Learner lx(config.learner_x, Side::X, payoff);
  Learner ly(config.learner_y, Side::Y, payoff);
  const bool adaptive = config.schedule.adaptive();
  if (adaptive && (config.learner_y.kind == LearnerKind::BeTheLeader ||
                   config.learner_y.kind == LearnerKind::BTRL)) {
    throw ConfigError("run_game: adaptive weights are unknown to a " +
                      to_string(config.learner_y.kind) + " y-player");
  }

  GameTrace tr;
  tr.T = config.T;
  tr.xs.reserve(config.T);
  tr.ys.reserve(config.T);
  for (int t = 1; t <= config.T; ++t) {
    double alpha = 0.0;
    Point x;
    Point y;
    try {
      std::optional<double> known;
      if (!adaptive) known = emit_weight(config.schedule, t);
      x = lx.act(t, known, nullptr);
      require_finite(x, "x-player action");
      y = ly.act(t, known, ly.prescient() ? &x : nullptr);
      require_finite(y, "y-player action");
      if (adaptive) {
        const Point grad = payoff.grad_x(x, y);
        try {
          alpha = emit_weight(config.schedule, t, &grad);
        } catch (const DegenerateGradientError&) {
          if (config.halt_at_weight_floor && t > 1) {
            tr.floor_round = t;
            break;
          }
          throw;
        }
      } else {
        alpha = *known;
      }
      lx.observe(alpha, x, y);
      ly.observe(alpha, y, x);
    } catch (const Error&) {
      rethrow_at_round(t);
    }
    const double v = payoff.g(x, y);
    tr.xs.push_back(std::move(x));
    tr.ys.push_back(std::move(y));
    tr.alphas.push_back(alpha);
    tr.losses_x.push_back(v);
    tr.losses_y.push_back(-v);
  }

  tr.A_T = 0.0;
  for (double a : tr.alphas) tr.A_T += a;
  tr.x_bar = weighted_average(tr.xs, tr.alphas);
  tr.y_bar = weighted_average(tr.ys, tr.alphas);
  tr.regret_x = weighted_regret(tr, payoff, Side::X);
  tr.regret_y = weighted_regret(tr, payoff, Side::Y);
  tr.gap = equilibrium_gap(payoff, tr.x_bar, tr.y_bar);
  return tr;
}

double equilibrium_gap(const GamePayoff& payoff, const Point& x_bar, const Point& y_bar) {
  const double upper = payoff.g(x_bar, payoff.best_response_y(x_bar));
  const double lower = payoff.g(payoff.best_response_x(y_bar), y_bar);
  return clamp_gap(upper, lower);
}

double weighted_regret(const GameTrace& trace, const GamePayoff& payoff, Side side) {
  const int n = trace.rounds();
  if (n == 0) throw DomainError("weighted_regret: empty trace");
  // Normalised weights keep adaptive runs (alpha up to 1e20) in range.
  double total = 0.0;
  if (side == Side::X) {
    const Point best = payoff.argmin_weighted_x(trace.alphas, trace.ys);
    for (int t = 0; t < n; ++t) {
      const double w = trace.alphas[t] / trace.A_T;
      total += w * (payoff.g(trace.xs[t], trace.ys[t]) - payoff.g(best, trace.ys[t]));
    }
  } else {
    const Point best = payoff.argmax_weighted_y(trace.alphas, trace.xs);
    for (int t = 0; t < n; ++t) {
      const double w = trace.alphas[t] / trace.A_T;
      total += w * (payoff.g(trace.xs[t], best) - payoff.g(trace.xs[t], trace.ys[t]));
    }
  }
  return total * trace.A_T;
}

SandwichReport sandwich_report(const GameTrace& trace, const GamePayoff& payoff, double tol) {
  SandwichReport r;
  r.upper = payoff.g(trace.x_bar, payoff.best_response_y(trace.x_bar));
  r.lower = payoff.g(payoff.best_response_x(trace.y_bar), trace.y_bar);
  r.gap = clamp_gap(r.upper, r.lower);
  r.epsilon = (trace.regret_x + trace.regret_y) / trace.A_T;
  r.certificate = r.gap <= r.epsilon + tol;
  r.value = payoff.value;
  if (r.value) {
    const double v = *r.value;
    r.ordering = v - r.epsilon - tol <= r.lower && r.lower <= v + tol && v - tol <= r.upper &&
                 r.upper <= v + r.epsilon + tol;
  }
  return r;
}

bool check_sandwich(const GameTrace& trace, const GamePayoff& payoff) {
  return sandwich_report(trace, payoff).ok();
}

std::vector<double> prefix_gaps(const GameTrace& trace, const GamePayoff& payoff) {
  const int n = trace.rounds();
  std::vector<double> out;
  out.reserve(n);
  Point sx = Point::Zero(payoff.dim_x);
  Point sy = Point::Zero(payoff.dim_y);
  double a = 0.0;
  for (int t = 0; t < n; ++t) {
    sx += trace.alphas[t] * trace.xs[t];
    sy += trace.alphas[t] * trace.ys[t];
    a += trace.alphas[t];
    out.push_back(equilibrium_gap(payoff, sx / a, sy / a));
  }
  return out;
}

PrefixRegrets prefix_regrets(const GameTrace& trace, const GamePayoff& payoff) {
  const int n = trace.rounds();
  PrefixRegrets out;
  out.x.reserve(n);
  out.y.reserve(n);
  if (!payoff.cross_affine) {
    for (int t = 1; t <= n; ++t) {
      GameTrace head;
      head.xs.assign(trace.xs.begin(), trace.xs.begin() + t);
      head.ys.assign(trace.ys.begin(), trace.ys.begin() + t);
      head.alphas.assign(trace.alphas.begin(), trace.alphas.begin() + t);
      for (double a : head.alphas) head.A_T += a;
      out.x.push_back(weighted_regret(head, payoff, Side::X));
      out.y.push_back(weighted_regret(head, payoff, Side::Y));
    }
    return out;
  }
  // Against fixed references x_ref = x_1, y_ref = y_1:
  //   sum_s a_s g(x, y_s) = A [g(x, y_bar) - g(x_ref, y_bar)] + sum_s a_s g(x_ref, y_s)
  // and symmetrically in y.
  const Point& x_ref = trace.xs.front();
  const Point& y_ref = trace.ys.front();
  Point sx = Point::Zero(payoff.dim_x);
  Point sy = Point::Zero(payoff.dim_y);
  double a = 0.0;
  double played = 0.0;
  double ref_x = 0.0;
  double ref_y = 0.0;
  std::vector<double> prefix_w;
  std::vector<Point> prefix_xs;
  std::vector<Point> prefix_ys;
  for (int t = 0; t < n; ++t) {
    const double al = trace.alphas[t];
    sx += al * trace.xs[t];
    sy += al * trace.ys[t];
    a += al;
    played += al * payoff.g(trace.xs[t], trace.ys[t]);
    ref_x += al * payoff.g(x_ref, trace.ys[t]);
    ref_y += al * payoff.g(trace.xs[t], y_ref);
    const Point xb = sx / a;
    const Point yb = sy / a;
    // The weighted oracles only depend on the averages for these payoffs.
    const Point bx = payoff.argmin_weighted_x({1.0}, {yb});
    const Point by = payoff.argmax_weighted_y({1.0}, {xb});
    const double vs_bx = a * (payoff.g(bx, yb) - payoff.g(x_ref, yb)) + ref_x;
    const double vs_by = a * (payoff.g(xb, by) - payoff.g(xb, y_ref)) + ref_y;
    out.x.push_back(played - vs_bx);
    out.y.push_back(vs_by - played);
  }
  return out;
}

}  // namespace fwgame
