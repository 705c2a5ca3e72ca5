#include "fwgame/harness.hpp"

#include "fwgame/learners.hpp"
#include "fwgame/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>

namespace fwgame {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kCertificateRounds = 100;
constexpr int kBruteResolution = 201;

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Point normal_point(CounterRng& rng, int d, double scale = 1.0) {
  Point p(d);
  for (int i = 0; i < d; ++i) p[i] = scale * rng.normal();
  return p;
}

Point unit_direction(CounterRng& rng, int d) {
  Point p = normal_point(rng, d);
  while (p.norm() < 1e-6) p = normal_point(rng, d);
  return p / p.norm();
}

// Symmetric matrix with eigenvalues drawn from [lo, hi].
Matrix random_spd(CounterRng& rng, int d, double lo, double hi) {
  Matrix A(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) A(i, j) = rng.normal();
  }
  const Matrix Q = Eigen::HouseholderQR<Matrix>(A).householderQ();
  Point ev(d);
  for (int i = 0; i < d; ++i) ev[i] = rng.uniform(lo, hi);
  Matrix H = Q * ev.asDiagonal() * Q.transpose();
  return 0.5 * (H + H.transpose());
}

Point vec2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

class Recorder {
 public:
  Recorder(const ExperimentConfig& cfg, PresetResult& res) : cfg_(cfg), res_(res) {}

  void check(const std::string& name, double value, const std::string& rel, double threshold) {
    const auto it = cfg_.tolerances.find(name);
    if (it != cfg_.tolerances.end()) threshold = it->second;
    bool pass = false;
    if (rel == "<=") pass = value <= threshold;
    if (rel == ">=") pass = value >= threshold;
    if (rel == "<") pass = value < threshold;
    if (rel == ">") pass = value > threshold;
    if (rel == "==") pass = value == threshold;
    res_.checks.push_back({name, value, threshold, rel, pass});
  }

  void note(const std::string& text) { res_.notes.push_back(text); }

  // Certificate of one finished run; folded into a single check at the end.
  void certify(const GameTrace& trace, const GamePayoff& payoff) {
    const SandwichReport rep = sandwich_report(trace, payoff);
    worst_excess_ = std::max(worst_excess_, rep.gap - rep.epsilon);
    ordering_ok_ = ordering_ok_ && rep.ordering;
    ++runs_;
  }

  void finish_runs() {
    if (runs_ == 0) return;
    check("run_certificates", worst_excess_, "<=", 1e-7);
    check("run_sandwich_ordering", ordering_ok_ ? 1 : 0, "==", 1);
  }

 private:
  double worst_excess_ = -std::numeric_limits<double>::infinity();
  bool ordering_ok_ = true;
  int runs_ = 0;
  const ExperimentConfig& cfg_;
  PresetResult& res_;
};

std::vector<int> powers_of_two(int lo, int hi) {
  std::vector<int> out;
  for (int e = lo; e <= hi; ++e) out.push_back(1 << e);
  return out;
}

std::vector<int> T_list_or(const ExperimentConfig& cfg, std::vector<int> fallback) {
  return cfg.T_list.empty() ? fallback : cfg.T_list;
}

std::vector<double> average_values(const GameTrace& tr, const FWInstance& inst) {
  std::vector<double> out;
  Point s = Point::Zero(inst.set.dim());
  double a = 0.0;
  for (int t = 0; t < tr.rounds(); ++t) {
    s += tr.alphas[t] * tr.ys[t];
    a += tr.alphas[t];
    out.push_back(inst.f.value(s / a));
  }
  return out;
}

void add_certificate(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const CertificateGame game = certificate_game(cfg.preset, cfg.seed);
  const CertificateRun run = run_certificate(game, kBruteResolution);
  res.certificates.push_back(run);
  rec.check("certificate", run.report.gap - run.report.epsilon, "<=", 1e-7);
  if (run.report.value) rec.check("sandwich_ordering", run.report.ordering ? 1 : 0, "==", 1);
  if (run.brute_gap) {
    rec.check("brute_force_agreement", std::abs(*run.brute_gap - run.report.gap), "<=", 5e-3);
  }
}

// Power-law fit of the final gaps over the T list.
RateFit fit_gaps(const std::vector<int>& Ts, const std::vector<double>& gaps,
                 RateModel model = RateModel::PowerLaw) {
  std::vector<std::pair<double, double>> series;
  for (size_t i = 0; i < Ts.size(); ++i) series.emplace_back(Ts[i], gaps[i]);
  return fit_rate(series, model);
}

void record_fit(Recorder& rec, const std::string& what,
                const std::vector<std::pair<double, double>>& series, RateModel model) {
  try {
    const RateFit fit = fit_rate(series, model);
    std::ostringstream os;
    os << what << ": slope " << fit.slope_or_decay << ", r2 " << fit.r_squared << ", "
       << fit.points_used << " points";
    rec.note(os.str());
  } catch (const FitError& e) {
    rec.note(what + ": no fit (" + e.what() + ")");
  }
}

FWInstance vanilla_instance() {
  return quadratic_instance(Matrix::Identity(2, 2), vec2(0.4, -0.3), ConvexSet::l2_ball(1.0, 2),
                            vec2(-1.0, 0.0), "interior-l2");
}

FWInstance accelerated_instance() {
  return quadratic_instance(Matrix::Identity(2, 2), vec2(0.6, -0.8), ConvexSet::l2_ball(2.0, 2),
                            Point::Zero(2), "interior-l2-r2");
}

FWInstance linear_rate_instance() {
  return quadratic_instance(Matrix::Identity(2, 2), vec2(3.0, 1.0), ConvexSet::l2_ball(1.0, 2),
                            vec2(0.0, -1.0), "exterior-l2");
}

FWInstance strongly_convex_set_instance() {
  return quadratic_instance(Matrix::Identity(2, 2), vec2(1.2, 0.9), ConvexSet::l2_ball(1.0, 2),
                            vec2(-1.0, 0.0), "exterior-l2-appH");
}

QuadraticBilinearParams scadagrad_params() {
  QuadraticBilinearParams prm;
  prm.M.resize(2, 2);
  prm.M << 1.0, 0.3, 0.2, 0.8;
  prm.sigma_x = 1.0;
  prm.sigma_y = 0.25;
  prm.x0 = vec2(2.0, 1.0);
  prm.y0 = vec2(-1.0, 0.3);
  prm.set_x = ConvexSet::l2_ball(3.0, 2);
  return prm;
}

void fw_rate_preset(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec,
                    const FWInstance& inst, double slope_max, std::optional<double> slope_min) {
  const auto Ts = T_list_or(cfg, powers_of_two(6, 12));
  const GamePayoff payoff = fw_game_payoff(inst);
  std::vector<double> gaps;
  std::vector<std::pair<double, double>> errors;
  double worst_cx = 0.0;
  double worst_ry = 0.0;
  const double LD2 = inst.f.L * inst.set.diameter() * inst.set.diameter();
  for (int T : Ts) {
    const GameTrace tr = fw_as_game(inst, T);
    rec.certify(tr, payoff);
    gaps.push_back(tr.gap);
    const double err = inst.error(tr.y_bar);
    errors.emplace_back(T, err);
    worst_cx = std::max(worst_cx, tr.regret_x / tr.A_T * T / LD2);
    worst_ry = std::max(worst_ry, tr.regret_y / tr.A_T);
    res.summary.push_back({res.preset, cfg.seed, T, err, tr.gap, (tr.regret_x + tr.regret_y) / tr.A_T});
    if (T == Ts.back()) {
      const auto values = average_values(tr, inst);
      res.rounds = round_rows(res.preset, cfg.seed, tr, payoff, &values);
    }
  }
  const RateFit fit = fit_gaps(Ts, gaps);
  res.fits.push_back(fit);
  rec.check("gap_slope", fit.slope_or_decay, "<=", slope_max);
  if (slope_min) rec.check("gap_slope_floor", fit.slope_or_decay, ">=", *slope_min);
  rec.check("gap_r2", fit.r_squared, ">=", 0.98);
  rec.check("x_regret_constant", worst_cx, "<=", 8.0);
  rec.check("y_regret_avg", worst_ry, "<=", 1e-9);
  record_fit(rec, "primal error power law", errors, RateModel::PowerLaw);
}

void preset_fw_equivalence(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const int d = cfg.dims.value_or(5);
  const auto Ts = T_list_or(cfg, {200});
  CounterRng rng(cfg.seed, fnv1a("fw-equivalence/instances"));
  const Matrix H = random_spd(rng, d, 0.5, 2.0);
  const Point c = normal_point(rng, d, 0.8);
  Point lo(d);
  Point hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = -rng.uniform(0.5, 1.5);
    hi[i] = rng.uniform(0.5, 1.5);
  }
  const ConvexSet box = ConvexSet::box(lo, hi);
  const ConvexSet ball = ConvexSet::l2_ball(1.0, d);
  const std::vector<FWInstance> insts = {
      quadratic_instance(H, c, box, lo, "box"),
      quadratic_instance(H, c, ball, ball.boundary_point(-Point::Unit(d, 0)), "l2ball")};

  double worst = 0.0;
  for (const FWInstance& inst : insts) {
    const GamePayoff payoff = fw_game_payoff(inst);
    for (int T : Ts) {
      const GameTrace tr = fw_as_game(inst, T);
      rec.certify(tr, payoff);
      // Classic FW started from the first best response reproduces the
      // averages one round later.
      FWInstance shifted = inst;
      shifted.y0 = tr.ys.front();
      const auto classic = T > 1 ? classic_fw(shifted, T - 1) : std::vector<FWRow>{};
      Point s = Point::Zero(d);
      double a = 0.0;
      double dev = 0.0;
      for (int t = 0; t < T; ++t) {
        s += tr.alphas[t] * tr.ys[t];
        a += tr.alphas[t];
        const Point& w = t == 0 ? shifted.y0 : classic[t - 1].point;
        dev = std::max(dev, (s / a - w).norm());
      }
      worst = std::max(worst, dev);
      const std::string label = res.preset + ":" + inst.name;
      const double err = inst.f_min ? inst.error(tr.y_bar) : kNaN;
      res.summary.push_back({label, cfg.seed, T, err, tr.gap, (tr.regret_x + tr.regret_y) / tr.A_T});
      if (T == Ts.back()) {
        const auto values = average_values(tr, inst);
        auto rows = round_rows(label, cfg.seed, tr, payoff, &values);
        res.rounds.insert(res.rounds.end(), rows.begin(), rows.end());
      }
    }
  }
  rec.check("max_deviation", worst, "<=", 1e-9);
}

void preset_vanilla(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  fw_rate_preset(cfg, res, rec, vanilla_instance(), -0.85, -1.3);
}

void preset_strongly_convex_br(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const FWInstance inst = strongly_convex_set_instance();
  rec.check("B", inst.constants.B, ">", 0.0);
  rec.check("lambda", inst.set.lambda(), ">", 0.0);
  fw_rate_preset(cfg, res, rec, inst, -1.7, std::nullopt);
}

void preset_new_fw(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const FWInstance inst = accelerated_instance();
  const auto Ts = T_list_or(cfg, powers_of_two(6, 12));
  const double eta = new_fw_default_eta(inst) * cfg.eta_multiplier;
  const GamePayoff payoff = fw_game_payoff(inst);
  std::vector<double> gaps;
  std::vector<std::pair<double, double>> errors;
  long call_mismatch = 0;
  double engine_dev = 0.0;
  for (int T : Ts) {
    const NewFWResult nf = new_fw(inst, T, eta);
    call_mismatch = std::max(call_mismatch, std::abs(nf.lin_opt_calls - static_cast<long>(T)));
    const GameTrace tr = run_game(payoff, new_fw_game_config(inst, T, eta));
    rec.certify(tr, payoff);
    engine_dev = std::max(engine_dev, (tr.y_bar - nf.y_bars.back()).norm());
    gaps.push_back(tr.gap);
    const double err = inst.error(nf.y_bars.back());
    errors.emplace_back(T, err);
    res.summary.push_back({res.preset, cfg.seed, T, err, tr.gap, (tr.regret_x + tr.regret_y) / tr.A_T});
    if (T == Ts.back()) res.rounds = round_rows(res.preset, cfg.seed, tr, payoff, &nf.values);
  }
  const RateFit fit = fit_gaps(Ts, gaps);
  res.fits.push_back(fit);
  rec.check("gap_slope", fit.slope_or_decay, "<=", -1.8);
  rec.check("gap_r2", fit.r_squared, ">=", 0.98);
  rec.check("lin_opt_calls_minus_T", static_cast<double>(call_mismatch), "==", 0.0);
  rec.check("engine_agreement", engine_dev, "<=", 1e-10);
  std::ostringstream os;
  os << "eta = " << eta;
  rec.note(os.str());
  record_fit(rec, "primal error power law", errors, RateModel::PowerLaw);
}

GameConfig sc_aftl_config(const FWInstance& inst, int T) {
  GameConfig cfg;
  cfg.learner_x.kind = LearnerKind::SCAFTL;
  cfg.learner_x.initial = inst.f.gradient(inst.y0);
  cfg.learner_y.kind = LearnerKind::BestResponse;
  cfg.schedule = WeightSchedule{WeightKind::AdaptiveInvGradSq, 1e-10};
  cfg.T = T;
  cfg.halt_at_weight_floor = true;
  return cfg;
}

void preset_linear_fw(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const FWInstance inst = linear_rate_instance();
  const auto Ts = T_list_or(cfg, {200});
  const GamePayoff payoff = fw_game_payoff(inst);
  rec.check("B", inst.constants.B, ">=", 0.5);
  double worst_final = 0.0;
  double engine_dev = 0.0;
  for (int T : Ts) {
    const LinearRateResult lr = linear_rate_fw(inst, T);
    const double err = inst.error(lr.rows.back().point);
    worst_final = std::max(worst_final, err);
    const GameTrace tr = run_game(payoff, sc_aftl_config(inst, T));
    rec.certify(tr, payoff);
    engine_dev = std::max(engine_dev, (tr.y_bar - lr.rows.back().point).norm());
    res.summary.push_back({res.preset, cfg.seed, T, err, tr.gap, (tr.regret_x + tr.regret_y) / tr.A_T});
    if (T == Ts.back()) {
      std::vector<std::pair<double, double>> series;
      for (const auto& row : lr.rows) series.emplace_back(row.t, inst.error(row.point));
      const RateFit fit = fit_rate(series, RateModel::Exponential);
      res.fits.push_back(fit);
      rec.check("decay", fit.slope_or_decay, "<", 0.0);
      rec.check("decay_r2", fit.r_squared, ">=", 0.98);
      if (lr.floor_round) {
        rec.note("weight floor reached at round " + std::to_string(*lr.floor_round) +
                 "; averages held from there");
      }
      const auto values = average_values(tr, inst);
      res.rounds = round_rows(res.preset, cfg.seed, tr, payoff, &values);
    }
  }
  rec.check("final_error", worst_final, "<=", 1e-8);
  rec.check("engine_agreement", engine_dev, "<=", 1e-9);
}

void preset_scadagrad(const ExperimentConfig& cfg, PresetResult& res, Recorder& rec) {
  const QuadraticBilinearParams prm = scadagrad_params();
  const ScenarioPayoff sp = scenario_payoff(1, ScenarioParams{prm, std::nullopt});
  const auto saddle = quadratic_bilinear_saddle(prm);
  rec.check("minimizer_in_X", saddle ? 1 : 0, "==", 1);
  const auto Ts = T_list_or(cfg, {300});
  double worst_gap = 0.0;
  for (int T : Ts) {
    const GameTrace tr = sc_adagrad_game(sp.payoff, T, Point::Zero(2));
    rec.certify(tr, sp.payoff);
    worst_gap = std::max(worst_gap, tr.gap);
    res.summary.push_back({res.preset, cfg.seed, T, tr.gap, tr.gap, (tr.regret_x + tr.regret_y) / tr.A_T});
    if (T == Ts.back()) {
      const auto gaps = prefix_gaps(tr, sp.payoff);
      std::vector<std::pair<double, double>> series;
      for (size_t i = 0; i < gaps.size(); ++i) series.emplace_back(i + 1, gaps[i]);
      const RateFit fit = fit_rate(series, RateModel::Exponential);
      res.fits.push_back(fit);
      rec.check("decay", fit.slope_or_decay, "<", 0.0);
      rec.check("decay_r2", fit.r_squared, ">=", 0.95);
      if (tr.floor_round) {
        rec.note("weight floor reached at round " + std::to_string(*tr.floor_round) +
                 "; averages held from there");
      }
      res.rounds = round_rows(res.preset, cfg.seed, tr, sp.payoff);
    }
  }
  rec.check("final_gap", worst_gap, "<=", 1e-6);
  std::ostringstream os;
  os << "s-smoothness " << sp.s_smoothness << ", sigma_x " << prm.sigma_x;
  rec.note(os.str());
}

// Minimum of `obj` on a 1e-3 grid over the set: a 1e-2 sweep of the bounding
// box locates the basin, then a 1e-3 sweep covers +-0.1 around it. Fine grid
// points outside the set are replaced by their radial boundary points.
double grid_minimum(const ConvexSet& set, const std::function<double(const Point&)>& obj) {
  const Point lo = set.bbox_lower();
  const Point hi = set.bbox_upper();
  double best = std::numeric_limits<double>::infinity();
  Point arg = Point::Zero(2);
  Point p(2);
  for (double a = lo[0]; a <= hi[0] + 1e-12; a += 1e-2) {
    for (double b = lo[1]; b <= hi[1] + 1e-12; b += 1e-2) {
      p << a, b;
      if (!set.contains(p)) continue;
      const double v = obj(p);
      if (v < best) {
        best = v;
        arg = p;
      }
    }
  }
  const Point centre = arg;
  for (int i = -100; i <= 100; ++i) {
    for (int j = -100; j <= 100; ++j) {
      p << centre[0] + 1e-3 * i, centre[1] + 1e-3 * j;
      if (set.contains(p)) {
        best = std::min(best, obj(p));
      } else {
        best = std::min(best, obj(set.boundary_point(p)));
      }
    }
  }
  return best;
}

void preset_gauge_ftrl(const ExperimentConfig& cfg, PresetResult&, Recorder& rec) {
  const double eta = cfg.eta_multiplier;
  CounterRng rng(cfg.seed, fnv1a("gauge-ftrl-oracle/losses"));
  double worst = 0.0;
  double above = -std::numeric_limits<double>::infinity();
  for (const ConvexSet& set : {ConvexSet::l2_ball(1.0, 2), ConvexSet::lp_ball(1.5, 1.0, 2)}) {
    for (int k = 0; k < 50; ++k) {
      LearnerState st = LearnerState::make(LearnerKind::GaugeFTRL, 2, eta);
      st.cumulative_loss = unit_direction(rng, 2) * rng.uniform(0.0, 4.0);
      const Point x = gauge_ftrl_step(st, set, eta);
      const auto obj = [&](const Point& z) {
        const double g = set.gauge(z);
        return eta * st.cumulative_loss.dot(z) + g * g;
      };
      const double grid = grid_minimum(set, obj);
      worst = std::max(worst, std::abs(obj(x) - grid));
      above = std::max(above, obj(x) - grid);
    }
  }
  rec.check("max_grid_difference", worst, "<=", 2e-3);
  rec.check("closed_form_above_grid", above, "<=", 1e-12);
}

struct BoundExcess {
  double worst = -std::numeric_limits<double>::infinity();
  void add(double measured, double bound) { worst = std::max(worst, measured - bound); }
};

void preset_regret_bounds(const ExperimentConfig& cfg, PresetResult&, Recorder& rec) {
  const int d = cfg.dims.value_or(3);
  const int T = T_list_or(cfg, {200}).back();
  CounterRng rng(cfg.seed, fnv1a("regret-bounds/streams"));
  BoundExcess ftl_sum, ftl_log, ftrl, oftrl, adagrad;

  for (int s = 0; s < 20; ++s) {
    // Leader on sigma_t-strongly convex quadratics sigma_t/2 |x - a_t|^2.
    const double sigma = rng.uniform(0.2, 2.0);
    LearnerState st = LearnerState::make(LearnerKind::FTL, d);
    std::vector<double> sig;
    std::vector<Point> centres;
    const WeightedOracle leader = [&](const std::vector<double>&, const std::vector<Point>&) {
      Point num = Point::Zero(d);
      double den = 0.0;
      for (size_t i = 0; i < sig.size(); ++i) {
        num += sig[i] * centres[i];
        den += sig[i];
      }
      return Point(num / den);
    };
    Point x = normal_point(rng, d);
    double played = 0.0;
    double bound = 0.0;
    double sig_sum = 0.0;
    double G = 0.0;
    std::vector<Point> xs;
    for (int t = 0; t < T; ++t) {
      const double st_t = rng.uniform(sigma, 2 * sigma);
      const Point a = normal_point(rng, d, 2.0);
      const Point v = st_t * (x - a);
      sig_sum += st_t;
      bound += 0.5 * v.squaredNorm() / sig_sum;
      G = std::max(G, v.norm());
      played += 0.5 * st_t * (x - a).squaredNorm();
      sig.push_back(st_t);
      centres.push_back(a);
      st.history_weights.push_back(1.0);
      st.history.push_back(a);
      x = ftl_step(st, leader);
    }
    const Point best = leader({}, {});
    double comp = 0.0;
    for (size_t i = 0; i < sig.size(); ++i) comp += 0.5 * sig[i] * (best - centres[i]).squaredNorm();
    ftl_sum.add(played - comp, bound);
    ftl_log.add(played - comp, G * G / (2 * sigma) * (std::log(T) + 1));
  }

  for (int s = 0; s < 20; ++s) {
    // Linear losses on L2Ball(r) with R = |x|^2; D = sup R = r^2.
    const double r = rng.uniform(0.5, 2.0);
    const ConvexSet ball = ConvexSet::l2_ball(r, d);
    const double eta = rng.uniform(0.05, 1.0);
    LearnerState st = LearnerState::make(LearnerKind::FTRL, d, eta);
    double played = 0.0;
    double grad_sq = 0.0;
    for (int t = 0; t < T; ++t) {
      const Point x = ftrl_step(st, ball, Regularizer::SquaredL2, eta);
      const Point l = normal_point(rng, d) + 0.5 * Point::Ones(d);
      played += l.dot(x);
      grad_sq += l.squaredNorm();
      st.cumulative_loss += l;
    }
    const double comp = st.cumulative_loss.dot(ball.lin_opt(st.cumulative_loss));
    ftrl.add(played - comp, r * r / eta + 0.5 * eta * grad_sq);
  }

  for (int s = 0; s < 20; ++s) {
    // Optimistic leader with noisy hints; R = gauge^2 (beta-strongly convex),
    // R(0) = 0 and R = 1 on the boundary where the comparator lives.
    const bool lp = s % 2 == 1;
    const double r = rng.uniform(0.5, 2.0);
    const ConvexSet set = lp ? ConvexSet::lp_ball(1.5, r, d) : ConvexSet::l2_ball(r, d);
    const double eta = rng.uniform(0.05, 1.0);
    LearnerState st = LearnerState::make(LearnerKind::OptimisticFTRL, d, eta);
    Point prev = Point::Zero(d);
    double played = 0.0;
    double dev_sq = 0.0;
    for (int t = 0; t < T; ++t) {
      const Point l = normal_point(rng, d) + Point::Ones(d);
      const Point hint = prev + normal_point(rng, d, rng.uniform(0.0, 1.0));
      const Point x = optimistic_ftrl_step(st, set, Regularizer::SquaredGauge, eta, hint);
      played += l.dot(x);
      dev_sq += (l - hint).squaredNorm();
      st.cumulative_loss += l;
      prev = l;
    }
    const Point best = set.lin_opt(st.cumulative_loss);
    const double R_best = set.gauge(best) * set.gauge(best);
    oftrl.add(played - st.cumulative_loss.dot(best), R_best / eta + eta / set.beta() * dev_sq);
  }

  for (int s = 0; s < 20; ++s) {
    // theta_t/2 |x - a_t|^2 over L2Ball(1) with centres partly outside.
    const ConvexSet ball = ConvexSet::l2_ball(1.0, d);
    LearnerState st = LearnerState::make(LearnerKind::SCAdaGrad, d);
    st.current = ball.project(normal_point(rng, d));
    double played = 0.0;
    double bound = 0.0;
    std::vector<double> th;
    std::vector<Point> centres;
    for (int t = 0; t < T; ++t) {
      const double theta = rng.uniform(0.5, 2.0);
      const Point a = normal_point(rng, d, 1.0);
      const Point x = st.current;
      const Point g = theta * (x - a);
      played += 0.5 * theta * (x - a).squaredNorm();
      sc_adagrad_step(st, g, theta, &ball);
      bound += 0.5 * g.squaredNorm() / st.theta_sum;
      th.push_back(theta);
      centres.push_back(a);
    }
    Point num = Point::Zero(d);
    double den = 0.0;
    for (size_t i = 0; i < th.size(); ++i) {
      num += th[i] * centres[i];
      den += th[i];
    }
    const Point best = ball.project(num / den);
    double comp = 0.0;
    for (size_t i = 0; i < th.size(); ++i) comp += 0.5 * th[i] * (best - centres[i]).squaredNorm();
    adagrad.add(played - comp, bound);
  }

  rec.check("ftl_strongly_convex_excess", ftl_sum.worst, "<=", 1e-6);
  rec.check("ftl_log_excess", ftl_log.worst, "<=", 1e-6);
  rec.check("ftrl_excess", ftrl.worst, "<=", 1e-6);
  rec.check("optimistic_ftrl_excess", oftrl.worst, "<=", 1e-6);
  rec.check("sc_adagrad_excess", adagrad.worst, "<=", 1e-6);
}

void preset_set_lemmas(const ExperimentConfig& cfg, PresetResult&, Recorder& rec) {
  CounterRng rng(cfg.seed, fnv1a("set-lemmas/samples"));
  Point lo(2);
  Point hi(2);
  lo << -1.0, -0.5;
  hi << 2.0, 1.5;
  const std::vector<ConvexSet> sets = {
      ConvexSet::l2_ball(1.5, 2), ConvexSet::lp_ball(1.5, 1.0, 2), ConvexSet::lp_ball(1.2, 2.0, 3),
      ConvexSet::lp_ball(1.8, 0.7, 4), ConvexSet::box(lo, hi)};
  double homog = 0.0;
  double boundary = 0.0;
  double membership = 0.0;
  double midpoint = -std::numeric_limits<double>::infinity();
  double lipschitz = 0.0;
  for (const ConvexSet& set : sets) {
    const int d = set.dim();
    const bool ball = set.kind() != ConvexSet::Kind::Box;
    for (int k = 0; k < 500; ++k) {
      const Point x = normal_point(rng, d, 1.5);
      const double rho = rng.uniform(0.0, 5.0);
      homog = std::max(homog, std::abs(set.gauge(rho * x) - rho * set.gauge(x)));
      // Boundary points built directly from the set's defining norm.
      if (ball) {
        const double n = std::pow(x.array().abs().pow(set.p()).sum(), 1.0 / set.p());
        boundary = std::max(boundary, std::abs(set.gauge(set.radius() * x / n) - 1.0));
      } else {
        Point b = x;
        const int i = static_cast<int>(rng.uniform(0.0, d));
        b = b.cwiseMax(set.lower()).cwiseMin(set.upper());
        b[i] = rng.uniform() < 0.5 ? set.lower()[i] : set.upper()[i];
        boundary = std::max(boundary, std::abs(set.gauge(b) - 1.0));
      }
      const double g = set.gauge(x);
      if (std::abs(g - 1.0) > 1e-9 && (g <= 1.0) != set.contains(x, 0.0)) membership += 1;
      if (ball) {
        const Point u = normal_point(rng, d, 2.0);
        const Point v = normal_point(rng, d, 2.0);
        const double gu = set.gauge(u);
        const double gv = set.gauge(v);
        const double gm = set.gauge(0.5 * (u + v));
        midpoint = std::max(midpoint, gm * gm - 0.5 * (gu * gu + gv * gv) +
                                          set.beta() / 8.0 * (u - v).squaredNorm());
      }
    }
    if (ball) {
      for (int k = 0; k < 1000; ++k) {
        const Point p = normal_point(rng, d, rng.uniform(0.01, 5.0));
        const Point q = k % 3 == 0 ? Point(p + normal_point(rng, d, 1e-3))
                                   : normal_point(rng, d, rng.uniform(0.01, 5.0));
        if (p.norm() == 0 || q.norm() == 0) continue;
        if (!strongly_convex_br_lipschitz_check(set, p, q)) lipschitz += 1;
      }
    }
  }
  // s(x) = max over a y-grid of sigma/2 |x|^2 + x^T M y is sigma-strongly convex.
  const double sigma = 0.7;
  Matrix M(2, 2);
  M << 1.0, -0.4, 0.3, 0.9;
  std::vector<Point> ygrid;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) ygrid.push_back(vec2(-1 + i / 20.0, -1 + j / 20.0));
  }
  const auto s = [&](const Point& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const Point& y : ygrid) best = std::max(best, 0.5 * sigma * x.squaredNorm() + x.dot(M * y));
    return best;
  };
  double sup_midpoint = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    const Point u = normal_point(rng, 2, 2.0);
    const Point v = normal_point(rng, 2, 2.0);
    sup_midpoint = std::max(sup_midpoint, s(0.5 * (u + v)) - 0.5 * (s(u) + s(v)) +
                                              sigma / 8.0 * (u - v).squaredNorm());
  }
  rec.check("gauge_homogeneity", homog, "<=", 1e-9);
  rec.check("gauge_boundary", boundary, "<=", 1e-9);
  rec.check("membership_mismatches", membership, "==", 0.0);
  rec.check("beta_gauge_midpoint", midpoint, "<=", 1e-8);
  rec.check("lipschitz_violations", lipschitz, "==", 0.0);
  rec.check("sup_strong_convexity_midpoint", sup_midpoint, "<=", 1e-6);
}

using PresetFn = void (*)(const ExperimentConfig&, PresetResult&, Recorder&);

const std::vector<std::pair<std::string, PresetFn>>& registry() {
  static const std::vector<std::pair<std::string, PresetFn>> r = {
      {"fw-equivalence", preset_fw_equivalence},
      {"vanilla-fw-rate", preset_vanilla},
      {"new-fw-rate", preset_new_fw},
      {"linear-fw-rate", preset_linear_fw},
      {"scadagrad-game-rate", preset_scadagrad},
      {"gauge-ftrl-oracle", preset_gauge_ftrl},
      {"regret-bounds", preset_regret_bounds},
      {"set-lemmas", preset_set_lemmas},
      {"strongly-convex-br", preset_strongly_convex_br},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

bool is_preset(const std::string& name) {
  const auto& n = preset_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

bool PresetResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string PresetResult::report() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "preset " << preset << " (seed " << seed << ")\n";
  for (const auto& c : checks) {
    os << "  " << c.name << " = " << c.value << ' ' << c.relation << ' ' << c.threshold << ": "
       << (c.pass ? "PASS" : "FAIL") << '\n';
  }
  for (const auto& f : fits) {
    os << "  fit " << (f.model == RateModel::PowerLaw ? "power-law slope " : "exponential decay ")
       << f.slope_or_decay << ", r2 " << f.r_squared << ", " << f.points_used << " points\n";
  }
  for (const auto& c : certificates) {
    os << "  certificate " << c.label << ": gap " << c.report.gap << " <= eps " << c.report.epsilon
       << (c.report.certificate ? " ok" : " VIOLATED");
    if (c.brute_gap) os << ", grid gap " << *c.brute_gap;
    os << '\n';
  }
  for (const auto& n : notes) os << "  note: " << n << '\n';
  os << "  result: " << (passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

PresetResult run_preset(const ExperimentConfig& config) {
  config.validate();
  PresetResult res;
  res.preset = config.preset;
  res.seed = config.seed;
  Recorder rec(config, res);
  for (const auto& [name, fn] : registry()) {
    if (name == config.preset) fn(config, res, rec);
  }
  rec.finish_runs();
  add_certificate(config, res, rec);
  if (res.rounds.empty() && !res.certificates.empty()) {
    const CertificateGame game = certificate_game(config.preset, config.seed);
    const GameTrace tr = run_game(game.payoff, game.config);
    res.rounds = round_rows(res.preset, config.seed, tr, game.payoff);
    res.summary.push_back({res.preset, config.seed, tr.T, tr.gap, tr.gap,
                           (tr.regret_x + tr.regret_y) / tr.A_T});
  }
  return res;
}

std::vector<RoundRow> round_rows(const std::string& preset, std::uint64_t seed,
                                 const GameTrace& trace, const GamePayoff& payoff,
                                 const std::vector<double>* values) {
  const auto gaps = prefix_gaps(trace, payoff);
  const auto regrets = prefix_regrets(trace, payoff);
  std::vector<RoundRow> rows;
  rows.reserve(trace.rounds());
  for (int t = 0; t < trace.rounds(); ++t) {
    RoundRow r;
    r.preset = preset;
    r.seed = seed;
    r.T = trace.T;
    r.t = t + 1;
    r.alpha = trace.alphas[t];
    r.f_or_g_value = values && t < static_cast<int>(values->size()) ? (*values)[t]
                                                                     : trace.losses_x[t];
    r.gap = gaps[t];
    r.regret_x_partial = regrets.x[t];
    r.regret_y_partial = regrets.y[t];
    rows.push_back(r);
  }
  return rows;
}

CertificateGame certificate_game(const std::string& preset, std::uint64_t seed) {
  if (!is_preset(preset)) throw ConfigError("unknown preset '" + preset + "'");
  CounterRng rng(seed, fnv1a("certificate/" + preset));
  CertificateGame game;
  game.label = preset + "/seed-" + std::to_string(seed);
  const Matrix H = random_spd(rng, 2, 0.5, 2.0);
  auto fw_game = [&](const FWInstance& inst, GameConfig cfg) {
    game.payoff = fw_game_payoff(inst);
    game.config = cfg;
  };

  if (preset == "fw-equivalence") {
    Point lo(2);
    Point hi(2);
    lo << -rng.uniform(0.5, 1.5), -rng.uniform(0.5, 1.5);
    hi << rng.uniform(0.5, 1.5), rng.uniform(0.5, 1.5);
    const FWInstance inst = quadratic_instance(H, normal_point(rng, 2, 0.8),
                                               ConvexSet::box(lo, hi), lo);
    fw_game(inst, fw_game_config(inst, kCertificateRounds));
  } else if (preset == "vanilla-fw-rate") {
    const double r = rng.uniform(0.5, 1.5);
    const ConvexSet ball = ConvexSet::l2_ball(r, 2);
    const FWInstance inst = quadratic_instance(H, normal_point(rng, 2, 0.6 * r), ball,
                                               ball.boundary_point(unit_direction(rng, 2)));
    fw_game(inst, fw_game_config(inst, kCertificateRounds));
  } else if (preset == "new-fw-rate") {
    const FWInstance inst =
        quadratic_instance(H, normal_point(rng, 2), ConvexSet::l2_ball(2.0, 2), Point::Zero(2));
    fw_game(inst, new_fw_game_config(inst, kCertificateRounds, new_fw_default_eta(inst)));
  } else if (preset == "linear-fw-rate") {
    const ConvexSet ball = ConvexSet::l2_ball(1.0, 2);
    const FWInstance inst = quadratic_instance(H, unit_direction(rng, 2) * rng.uniform(1.5, 3.0),
                                               ball, ball.boundary_point(unit_direction(rng, 2)));
    fw_game(inst, sc_aftl_config(inst, kCertificateRounds));
  } else if (preset == "scadagrad-game-rate" || preset == "regret-bounds") {
    QuadraticBilinearParams prm;
    prm.M = Matrix(2, 2);
    for (int i = 0; i < 4; ++i) prm.M(i / 2, i % 2) = 0.7 * rng.normal();
    prm.sigma_x = rng.uniform(0.5, 1.5);
    prm.x0 = normal_point(rng, 2);
    prm.y0 = normal_point(rng, 2);
    GameConfig cfg;
    cfg.learner_x.kind = LearnerKind::SCAdaGrad;
    cfg.learner_x.initial = Point::Zero(2);
    cfg.T = kCertificateRounds;
    if (preset == "scadagrad-game-rate") {
      prm.sigma_y = rng.uniform(0.5, 1.5);
      QuadraticBilinearParams free = prm;
      const auto saddle = quadratic_bilinear_saddle(free);
      prm.set_x = ConvexSet::l2_ball(std::max(2.0, 1.5 * saddle->first.norm()), 2);
      cfg.learner_y.kind = LearnerKind::BestResponse;
      cfg.schedule = WeightSchedule{WeightKind::AdaptiveInvGradSq, 1e-10};
      cfg.halt_at_weight_floor = true;
    } else {
      prm.sigma_y = 0.0;
      prm.set_x = ConvexSet::l2_ball(2.0, 2);
      prm.set_y = ConvexSet::l2_ball(1.0, 2);
      cfg.learner_y.kind = LearnerKind::OptimisticFTRL;
      cfg.learner_y.regularizer = Regularizer::SquaredL2;
      cfg.learner_y.eta = 0.5;
      cfg.schedule.kind = WeightKind::Uniform;
    }
    game.payoff = quadratic_bilinear_payoff(prm);
    game.config = cfg;
  } else if (preset == "gauge-ftrl-oracle") {
    const FWInstance inst = quadratic_instance(H, normal_point(rng, 2),
                                               ConvexSet::lp_ball(1.5, rng.uniform(0.8, 1.5), 2),
                                               Point::Zero(2));
    GameConfig cfg = fw_game_config(inst, kCertificateRounds);
    cfg.learner_y.kind = LearnerKind::GaugeFTRL;
    cfg.learner_y.eta = 1.0;
    fw_game(inst, cfg);
  } else if (preset == "set-lemmas") {
    const FWInstance inst = quadratic_instance(H, normal_point(rng, 2),
                                               ConvexSet::lp_ball(1.2, 1.5, 2), Point::Zero(2));
    GameConfig cfg = fw_game_config(inst, kCertificateRounds);
    cfg.learner_y.kind = LearnerKind::BeTheLeader;
    fw_game(inst, cfg);
  } else {  // strongly-convex-br
    const ConvexSet ball = ConvexSet::l2_ball(1.0, 2);
    const FWInstance inst = quadratic_instance(H, unit_direction(rng, 2) * rng.uniform(1.3, 3.0),
                                               ball, ball.boundary_point(unit_direction(rng, 2)));
    fw_game(inst, fw_game_config(inst, kCertificateRounds));
  }
  return game;
}

CertificateRun run_certificate(const CertificateGame& game, int brute_resolution) {
  CertificateRun run;
  run.label = game.label;
  const GameTrace tr = run_game(game.payoff, game.config);
  run.report = sandwich_report(tr, game.payoff);
  if (game.payoff.dim_x <= 2 && game.payoff.dim_y <= 2) {
    run.brute_gap = brute_force_gap(game.payoff, tr.x_bar, tr.y_bar, brute_resolution);
  }
  return run;
}

}  // namespace fwgame
