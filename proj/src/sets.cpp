#include "fwgame/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fwgame {

namespace {

constexpr int kBisectionCap = 200;
constexpr double kProjectionTol = 1e-10;

// Root of t + mu p t^(p-1) = a on [0, a].
double shrink_coordinate(double a, double mu, double p) {
  if (a == 0.0 || mu == 0.0) return a;
  double lo = 0.0;
  double hi = a;
  for (int i = 0; i < kBisectionCap && hi - lo > 1e-16 * (1.0 + a); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid + mu * p * std::pow(mid, p - 1) > a) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace

ConvexSet ConvexSet::lp_ball(double p, double r, int dim) {
  if (!(p > 1.0) || p > 2.0) {
    throw ConfigError("lp_ball: p must lie in (1, 2], got " + std::to_string(p));
  }
  if (!(r > 0.0)) throw ConfigError("lp_ball: radius must be positive");
  if (dim < 1) throw ConfigError("lp_ball: dimension must be >= 1");
  ConvexSet s;
  s.kind_ = p == 2.0 ? Kind::L2Ball : Kind::LpBall;
  s.p_ = p;
  s.r_ = r;
  s.dim_ = dim;
  return s;
}

ConvexSet ConvexSet::l2_ball(double r, int dim) { return lp_ball(2.0, r, dim); }

ConvexSet ConvexSet::box(const Point& lower, const Point& upper) {
  if (lower.size() != upper.size() || lower.size() == 0) {
    throw ConfigError("box: bounds must be nonempty and of equal length");
  }
  if (!lower.allFinite() || !upper.allFinite()) throw ConfigError("box: bounds must be finite");
  if ((lower.array() > upper.array()).any()) throw ConfigError("box: lower exceeds upper");
  ConvexSet s;
  s.kind_ = Kind::Box;
  s.dim_ = static_cast<int>(lower.size());
  s.lower_ = lower;
  s.upper_ = upper;
  s.p_ = 0.0;
  s.r_ = 0.0;
  return s;
}

double ConvexSet::lambda() const {
  return kind_ == Kind::Box ? 0.0 : (p_ - 1.0) / r_;
}

double ConvexSet::beta() const {
  return kind_ == Kind::Box ? 0.0 : 2.0 * (p_ - 1.0) / (r_ * r_);
}

bool ConvexSet::contains_origin() const {
  if (kind_ != Kind::Box) return true;
  return (lower_.array() <= 0).all() && (upper_.array() >= 0).all();
}

bool ConvexSet::origin_interior() const {
  if (kind_ != Kind::Box) return true;
  return (lower_.array() < 0).all() && (upper_.array() > 0).all();
}

double ConvexSet::diameter() const {
  return kind_ == Kind::Box ? (upper_ - lower_).norm() : 2.0 * r_;
}

void ConvexSet::check_dim(const Point& x, const char* what) const {
  if (x.size() != dim_) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(dim_) + ", got " + std::to_string(x.size()));
  }
}

double ConvexSet::lp_norm(const Point& x) const {
  if (kind_ == Kind::L2Ball) return x.norm();
  return std::pow(x.array().abs().pow(p_).sum(), 1.0 / p_);
}

bool ConvexSet::contains(const Point& x, double tol) const {
  check_dim(x, "contains");
  if (kind_ == Kind::Box) {
    return ((x - lower_).array() >= -tol).all() && ((upper_ - x).array() >= -tol).all();
  }
  return lp_norm(x) <= r_ * (1.0 + tol);
}

double ConvexSet::gauge(const Point& x) const {
  check_dim(x, "gauge");
  if (kind_ != Kind::Box) return lp_norm(x) / r_;
  if (!origin_interior()) {
    throw UnsupportedOperation("gauge: box does not contain the origin in its interior");
  }
  double g = 0.0;
  for (int i = 0; i < dim_; ++i) {
    if (x[i] > 0) g = std::max(g, x[i] / upper_[i]);
    if (x[i] < 0) g = std::max(g, x[i] / lower_[i]);
  }
  return g;
}

Point ConvexSet::lin_opt(const Point& c) const {
  check_dim(c, "lin_opt");
  if (kind_ == Kind::Box) {
    Point x(dim_);
    for (int i = 0; i < dim_; ++i) x[i] = c[i] < 0 ? upper_[i] : lower_[i];
    return x;
  }
  if ((c.array() == 0.0).all()) {
    Point x = Point::Zero(dim_);
    x[0] = r_;
    return x;
  }
  if (kind_ == Kind::L2Ball) return -r_ * c / c.norm();
  // Dual-norm scaling: w_i = sign(c_i) |c_i|^(q-1), x = -r w / |w|_p.
  const double q = p_ / (p_ - 1.0);
  const double scale = c.cwiseAbs().maxCoeff();
  Point w(dim_);
  for (int i = 0; i < dim_; ++i) {
    const double a = std::abs(c[i]) / scale;
    w[i] = (c[i] > 0 ? 1.0 : (c[i] < 0 ? -1.0 : 0.0)) * std::pow(a, q - 1.0);
  }
  return -r_ * w / lp_norm(w);
}

Point ConvexSet::project_lp(const Point& x) const {
  const Point a = x.cwiseAbs();
  auto shrunk_norm = [&](double mu) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::pow(shrink_coordinate(a[i], mu, p_), p_);
    return std::pow(s, 1.0 / p_);
  };
  double mu_lo = 0.0;
  double mu_hi = 1.0;
  for (int i = 0; i < kBisectionCap && shrunk_norm(mu_hi) > r_; ++i) mu_hi *= 2.0;

  // Outer bisection on the multiplier. mu_hi always gives a feasible point;
  // stop once the two ends of the bracket map to the same point.
  Point out(dim_);
  Point out_lo(dim_);
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = 0.5 * (mu_lo + mu_hi);
    if (shrunk_norm(mid) > r_) {
      mu_lo = mid;
    } else {
      mu_hi = mid;
    }
    for (int i = 0; i < dim_; ++i) {
      out[i] = std::copysign(shrink_coordinate(a[i], mu_hi, p_), x[i]);
      out_lo[i] = std::copysign(shrink_coordinate(a[i], mu_lo, p_), x[i]);
    }
    if ((out - out_lo).cwiseAbs().maxCoeff() < 0.01 * kProjectionTol) break;
  }
  return out;
}

Point ConvexSet::project(const Point& x) const {
  check_dim(x, "project");
  switch (kind_) {
    case Kind::Box:
      return x.cwiseMax(lower_).cwiseMin(upper_);
    case Kind::L2Ball: {
      const double n = x.norm();
      return n <= r_ ? x : Point(x * (r_ / n));
    }
    case Kind::LpBall:
      return lp_norm(x) <= r_ ? x : project_lp(x);
  }
  return x;
}

Point ConvexSet::boundary_point(const Point& u) const {
  const double g = gauge(u);
  if (!(g > 0)) throw DomainError("boundary_point: zero direction");
  return u / g;
}

Point ConvexSet::bbox_lower() const {
  return kind_ == Kind::Box ? lower_ : Point::Constant(dim_, -r_);
}

Point ConvexSet::bbox_upper() const {
  return kind_ == Kind::Box ? upper_ : Point::Constant(dim_, r_);
}

std::string ConvexSet::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Box:
      os << "Box(d=" << dim_ << ")";
      break;
    case Kind::L2Ball:
      os << "L2Ball(r=" << r_ << ", d=" << dim_ << ")";
      break;
    case Kind::LpBall:
      os << "LpBall(p=" << p_ << ", r=" << r_ << ", d=" << dim_ << ")";
      break;
  }
  return os.str();
}

std::pair<double, double> strongly_convex_br_lipschitz_sides(const ConvexSet& set,
                                                             const Point& p,
                                                             const Point& q) {
  if (!(set.lambda() > 0)) {
    throw UnsupportedOperation("lipschitz check needs a strongly convex set");
  }
  const double np = p.norm();
  const double nq = q.norm();
  if (np == 0.0 || nq == 0.0) throw DomainError("lipschitz check: zero vector");
  const Point xp = set.lin_opt(-p);
  const Point xq = set.lin_opt(-q);
  return {(xp - xq).norm(), 2.0 * (p - q).norm() / (set.lambda() * (np + nq))};
}

bool strongly_convex_br_lipschitz_check(const ConvexSet& set, const Point& p,
                                        const Point& q) {
  const auto [lhs, rhs] = strongly_convex_br_lipschitz_sides(set, p, q);
  return lhs <= rhs + 1e-9;
}

}  // namespace fwgame
