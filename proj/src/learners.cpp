#include "fwgame/learners.hpp"

#include <algorithm>
#include <map>

namespace fwgame {

namespace {

const std::map<std::string, LearnerKind>& kind_names() {
  static const std::map<std::string, LearnerKind> names = {
      {"ftl", LearnerKind::FTL},
      {"ftrl", LearnerKind::FTRL},
      {"gauge-ftrl", LearnerKind::GaugeFTRL},
      {"optimistic-ftl", LearnerKind::OptimisticFTL},
      {"optimistic-ftrl", LearnerKind::OptimisticFTRL},
      {"best-response", LearnerKind::BestResponse},
      {"be-the-leader", LearnerKind::BeTheLeader},
      {"btrl", LearnerKind::BTRL},
      {"sc-adagrad", LearnerKind::SCAdaGrad},
      {"sc-aftl", LearnerKind::SCAFTL},
  };
  return names;
}

}  // namespace

std::string to_string(LearnerKind kind) {
  for (const auto& [name, k] : kind_names()) {
    if (k == kind) return name;
  }
  return "?";
}

LearnerKind learner_kind_from_string(const std::string& name) {
  const auto it = kind_names().find(name);
  if (it == kind_names().end()) throw ConfigError("unknown learner: " + name);
  return it->second;
}

bool is_prescient(LearnerKind kind) {
  return kind == LearnerKind::BestResponse || kind == LearnerKind::BeTheLeader ||
         kind == LearnerKind::BTRL;
}

bool uses_linear_losses(LearnerKind kind) {
  return kind == LearnerKind::FTRL || kind == LearnerKind::GaugeFTRL ||
         kind == LearnerKind::OptimisticFTRL || kind == LearnerKind::BTRL;
}

LearnerState LearnerState::make(LearnerKind kind, int dim, double eta) {
  if (dim < 1) throw DimensionError("LearnerState: dimension must be >= 1");
  LearnerState s;
  s.kind = kind;
  s.cumulative_loss = Point::Zero(dim);
  s.current = Point::Zero(dim);
  s.eta = eta;
  s.prescient = is_prescient(kind);
  return s;
}

Point gauge_ftrl_step(const LearnerState& state, const ConvexSet& set, double eta) {
  if (!(eta > 0)) throw DomainError("gauge_ftrl_step: eta must be positive");
  if (!set.origin_interior()) {
    throw UnsupportedOperation("gauge_ftrl_step: set has no gauge around the origin");
  }
  const Point& L = state.cumulative_loss;
  const Point z = set.lin_opt(L);
  const double rho = std::clamp(-0.5 * eta * L.dot(z), 0.0, 1.0);
  return rho * z;
}

Point ftrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg, double eta) {
  if (!(eta > 0)) throw DomainError("ftrl_step: eta must be positive");
  switch (reg) {
    case Regularizer::SquaredL2:
      // eta <L, x> + |x|^2 = |x + eta L / 2|^2 + const.
      return set.project(-0.5 * eta * state.cumulative_loss);
    case Regularizer::SquaredGauge:
      return gauge_ftrl_step(state, set, eta);
  }
  throw UnsupportedOperation("ftrl_step: unknown regularizer");
}

Point ftl_step(const LearnerState& state, const WeightedOracle& argmin_oracle) {
  if (state.history.empty()) throw DomainError("ftl_step: empty history");
  return argmin_oracle(state.history_weights, state.history);
}

Point optimistic_ftl_step(const LearnerState& state, const WeightedOracle& argmin_oracle,
                          double hint_weight) {
  if (state.history.empty()) throw DomainError("optimistic_ftl_step: empty history");
  if (!(hint_weight > 0)) throw DomainError("optimistic_ftl_step: hint weight must be positive");
  std::vector<double> w = state.history_weights;
  w.back() += hint_weight;
  return argmin_oracle(w, state.history);
}

Point best_response_step(const GamePayoff& payoff, const Point& opponent, Side side) {
  return side == Side::X ? payoff.best_response_x(opponent) : payoff.best_response_y(opponent);
}

Point btrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg, double eta,
                const Point& current_loss) {
  require_same_dim(state.cumulative_loss, current_loss, "btrl_step");
  LearnerState ahead = state;
  ahead.cumulative_loss += current_loss;
  return ftrl_step(ahead, set, reg, eta);
}

Point sc_adagrad_step(LearnerState& state, const Point& grad, double theta_t,
                      const ConvexSet* set) {
  if (!(theta_t > 0)) throw DomainError("sc_adagrad_step: theta_t must be positive");
  require_same_dim(state.current, grad, "sc_adagrad_step");
  state.theta_sum += theta_t;
  const Point step = state.current - grad / state.theta_sum;
  state.current = set ? set->project(step) : step;
  return state.current;
}

Point sc_aftl_step(LearnerState& state, const WeightedOracle& argmin_oracle,
                   const Point& grad_for_weight, const Point& loss_descriptor, double floor) {
  WeightSchedule schedule{WeightKind::AdaptiveInvGradSq, floor};
  const int t = static_cast<int>(state.history.size()) + 1;
  const double alpha = emit_weight(schedule, t, &grad_for_weight);
  state.history_weights.push_back(alpha);
  state.history.push_back(loss_descriptor);
  return argmin_oracle(state.history_weights, state.history);
}

Point optimistic_ftrl_step(const LearnerState& state, const ConvexSet& set, Regularizer reg,
                           double eta, const Point& hint) {
  return btrl_step(state, set, reg, eta, hint);
}

Learner::Learner(LearnerSpec spec, Side side, const GamePayoff& payoff)
    : spec_(std::move(spec)), side_(side), payoff_(payoff) {
  const int dim = side == Side::X ? payoff.dim_x : payoff.dim_y;
  state_ = LearnerState::make(spec_.kind, dim, spec_.eta);
  if (side == Side::X && state_.prescient) {
    throw ConfigError("x-player cannot be prescient (" + to_string(spec_.kind) + ")");
  }
  if (uses_linear_losses(spec_.kind)) {
    const bool linear = side == Side::X ? payoff.linear_in_x : payoff.linear_in_y;
    if (!linear) {
      throw UnsupportedOperation(to_string(spec_.kind) + " needs losses linear in its action");
    }
    own_set();
  }
  if (spec_.kind == LearnerKind::SCAdaGrad) {
    const double sigma = side == Side::X ? payoff.constants.sigma_x : payoff.constants.sigma_y;
    if (!(sigma > 0)) throw ConfigError("sc-adagrad needs a strongly convex loss");
    Point start = spec_.initial.value_or(Point::Zero(dim));
    require_same_dim(start, state_.current, "sc-adagrad initial point");
    const auto& set = side == Side::X ? payoff.set_x : payoff.set_y;
    state_.current = set ? set->project(start) : start;
  }
  if (spec_.initial) require_same_dim(*spec_.initial, state_.current, "initial point");
}

const ConvexSet& Learner::own_set() const {
  const auto& set = side_ == Side::X ? payoff_.set_x : payoff_.set_y;
  if (!set) throw UnsupportedOperation(to_string(spec_.kind) + " needs a constraint set");
  return *set;
}

WeightedOracle Learner::oracle() const {
  return side_ == Side::X ? payoff_.argmin_weighted_x : payoff_.argmax_weighted_y;
}

Point Learner::loss_vector(const Point& opponent) const {
  if (side_ == Side::X) return payoff_.grad_x(Point::Zero(payoff_.dim_x), opponent);
  return -payoff_.grad_y(opponent, Point::Zero(payoff_.dim_y));
}

Point Learner::act(int t, const std::optional<double>& alpha_now, const Point* opponent_now) {
  auto need_alpha = [&]() {
    if (!alpha_now) {
      throw UnsupportedOperation(to_string(spec_.kind) +
                                 " needs the round weight before acting; use a fixed schedule");
    }
    return *alpha_now;
  };
  auto need_opponent = [&]() -> const Point& {
    if (!opponent_now) throw ConsistencyError("prescient learner called without opponent");
    return *opponent_now;
  };
  auto first_round = [&]() -> Point {
    if (!spec_.initial) {
      throw ConfigError(to_string(spec_.kind) + " needs an initial point for round 1");
    }
    return *spec_.initial;
  };

  switch (spec_.kind) {
    case LearnerKind::FTL:
    case LearnerKind::SCAFTL:
      return state_.history.empty() ? first_round() : ftl_step(state_, oracle());
    case LearnerKind::OptimisticFTL:
      if (state_.history.empty()) return first_round();
      return optimistic_ftl_step(state_, oracle(), need_alpha());
    case LearnerKind::BeTheLeader: {
      LearnerState ahead = state_;
      ahead.history_weights.push_back(need_alpha());
      ahead.history.push_back(need_opponent());
      return ftl_step(ahead, oracle());
    }
    case LearnerKind::BestResponse:
      return best_response_step(payoff_, need_opponent(), side_);
    case LearnerKind::FTRL:
      return ftrl_step(state_, own_set(), spec_.regularizer, spec_.eta);
    case LearnerKind::GaugeFTRL:
      return gauge_ftrl_step(state_, own_set(), spec_.eta);
    case LearnerKind::OptimisticFTRL: {
      if (!last_loss_) return ftrl_step(state_, own_set(), spec_.regularizer, spec_.eta);
      const Point hint = need_alpha() * *last_loss_;
      return optimistic_ftrl_step(state_, own_set(), spec_.regularizer, spec_.eta, hint);
    }
    case LearnerKind::BTRL:
      return btrl_step(state_, own_set(), spec_.regularizer, spec_.eta,
                       need_alpha() * loss_vector(need_opponent()));
    case LearnerKind::SCAdaGrad:
      return state_.current;
  }
  (void)t;
  throw ConsistencyError("unknown learner kind");
}

void Learner::observe(double alpha, const Point& own, const Point& opponent) {
  if (uses_linear_losses(spec_.kind)) {
    const Point l = loss_vector(opponent);
    state_.cumulative_loss += alpha * l;
    last_loss_ = l;
    return;
  }
  switch (spec_.kind) {
    case LearnerKind::FTL:
    case LearnerKind::SCAFTL:
    case LearnerKind::OptimisticFTL:
    case LearnerKind::BeTheLeader:
      state_.history_weights.push_back(alpha);
      state_.history.push_back(opponent);
      break;
    case LearnerKind::SCAdaGrad: {
      const Point grad = side_ == Side::X ? payoff_.grad_x(own, opponent)
                                          : Point(-payoff_.grad_y(opponent, own));
      const double sigma =
          side_ == Side::X ? payoff_.constants.sigma_x : payoff_.constants.sigma_y;
      const auto& set = side_ == Side::X ? payoff_.set_x : payoff_.set_y;
      sc_adagrad_step(state_, alpha * grad, alpha * sigma, set ? &*set : nullptr);
      break;
    }
    default:
      break;
  }
}

}  // namespace fwgame
