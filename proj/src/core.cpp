#include "fwgame/core.hpp"

#include <cmath>

namespace fwgame {

bool is_finite(const Point& p) { return p.size() > 0 && p.allFinite(); }

void require_finite(const Point& p, const char* what) {
  if (p.size() == 0) throw DimensionError(std::string(what) + ": empty point");
  if (!p.allFinite()) throw DomainError(std::string(what) + ": non-finite coordinate");
}

void require_same_dim(const Point& a, const Point& b, const char* what) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()));
  }
}

Point weighted_average(const std::vector<Point>& points,
                       const std::vector<double>& weights) {
  if (points.empty() || points.size() != weights.size()) {
    throw DimensionError("weighted_average: need equal-length nonempty sequences");
  }
  Point sum = Point::Zero(points.front().size());
  double total = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != sum.size()) {
      throw DimensionError("weighted_average: points of mixed dimension");
    }
    if (!(weights[i] > 0.0)) throw DomainError("weighted_average: nonpositive weight");
    sum += weights[i] * points[i];
    total += weights[i];
  }
  return sum / total;
}

double emit_weight(const WeightSchedule& schedule, int t, const Point* grad) {
  if (t < 1) throw DomainError("emit_weight: round index must be >= 1");
  switch (schedule.kind) {
    case WeightKind::Uniform:
      return 1.0;
    case WeightKind::Linear:
      return static_cast<double>(t);
    case WeightKind::AdaptiveInvGradSq: {
      if (grad == nullptr) {
        throw DomainError("emit_weight: adaptive schedule needs a gradient");
      }
      const double n = grad->norm();
      if (!(n >= schedule.floor)) {
        throw DegenerateGradientError(
            "gradient norm " + std::to_string(n) + " below floor " +
                std::to_string(schedule.floor) +
                " at round " + std::to_string(t) +
                "; the lower bound B on gradient norms does not hold",
            t);
      }
      return 1.0 / (n * n);
    }
  }
  throw DomainError("emit_weight: unknown schedule kind");
}

std::string to_string(WeightKind kind) {
  switch (kind) {
    case WeightKind::Uniform: return "uniform";
    case WeightKind::Linear: return "linear";
    case WeightKind::AdaptiveInvGradSq: return "adaptive";
  }
  return "?";
}

double SmoothObjective::conjugate_value(const Point& x) const {
  if (!conjugate_gradient) {
    throw UnsupportedOperation("objective has no conjugate gradient map");
  }
  const Point u = conjugate_gradient(x);
  return x.dot(u) - value(u);
}

SmoothObjective quadratic_objective(const Matrix& H, const Point& c) {
  if (H.rows() != H.cols() || H.rows() != c.size()) {
    throw DimensionError("quadratic_objective: H must be square and match c");
  }
  if (!(H - H.transpose()).isZero(1e-12)) {
    throw DomainError("quadratic_objective: H must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -1e-12) throw DomainError("quadratic_objective: H must be PSD");

  SmoothObjective f;
  f.L = hi > 0 ? hi : 1.0;
  f.sigma = lo > 1e-12 ? lo : 0.0;
  f.value = [H, c](const Point& y) {
    const Point d = y - c;
    return 0.5 * d.dot(H * d);
  };
  f.gradient = [H, c](const Point& y) -> Point { return H * (y - c); };
  if (f.sigma > 0) {
    const Eigen::LDLT<Matrix> ldlt(H);
    f.conjugate_gradient = [ldlt, c](const Point& x) -> Point {
      return c + ldlt.solve(x);
    };
  }
  return f;
}

SmoothObjective isotropic_quadratic(const Point& c, double scale) {
  const long d = c.size();
  return quadratic_objective(scale * Matrix::Identity(d, d), c);
}

Point finite_difference_gradient(const std::function<double(const Point&)>& f,
                                 const Point& x) {
  const double h = 1e-6 * (1.0 + x.norm());
  Point g(x.size());
  Point probe = x;
  for (long i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double up = f(probe);
    probe[i] = x[i] - h;
    const double down = f(probe);
    probe[i] = x[i];
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

void GameConstants::validate() const {
  if (!(L > 0)) throw ConfigError("GameConstants: L must be positive");
  if (sigma_x < 0 || sigma_y < 0) throw ConfigError("GameConstants: negative sigma");
  if (sigma_x > L * (1 + 1e-12)) throw ConfigError("GameConstants: sigma_x exceeds L");
  if (!(G > 0)) throw ConfigError("GameConstants: G must be positive");
  if (B < 0) throw ConfigError("GameConstants: B must be nonnegative");
  if (!(D > 0)) throw ConfigError("GameConstants: D must be positive");
}

}  // namespace fwgame
