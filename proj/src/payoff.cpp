#include "fwgame/payoff.hpp"

#include <cmath>

namespace fwgame {

namespace {

Point project_or_identity(const std::optional<ConvexSet>& set, const Point& x) {
  return set ? set->project(x) : x;
}

double spectral_norm(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(0);
}

double set_radius(const ConvexSet& s) {
  return std::max(s.bbox_lower().norm(), s.bbox_upper().norm());
}

Point weighted_mean(const std::vector<double>& w, const std::vector<Point>& pts) {
  return weighted_average(pts, w);
}

// Maximiser of <v, y> over a box; zero coefficients take the upper bound.
Point box_argmax(const ConvexSet& box, const Point& v) {
  Point y(box.dim());
  for (int i = 0; i < box.dim(); ++i) y[i] = v[i] < 0 ? box.lower()[i] : box.upper()[i];
  return y;
}

// Minimiser of <v, x> over a box; zero coefficients take the upper bound.
Point box_argmin(const ConvexSet& box, const Point& v) {
  Point x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = v[i] > 0 ? box.lower()[i] : box.upper()[i];
  return x;
}

// argmax of <v, y> over a set, with the lexicographically largest point on ties.
Point set_argmax(const ConvexSet& set, const Point& v) {
  if (set.kind() == ConvexSet::Kind::Box) return box_argmax(set, v);
  return set.lin_opt(-v);
}

Point set_argmin(const ConvexSet& set, const Point& v) {
  if (set.kind() == ConvexSet::Kind::Box) return box_argmin(set, v);
  return set.lin_opt(v);
}

double golden_1d(const std::function<double(double)>& f, double lo, double hi,
                 double tol, double* best) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  // Endpoints matter when the minimum sits on the boundary.
  double arg = 0.5 * (a + b);
  double val = f(arg);
  for (double cand : {lo, hi}) {
    const double v = f(cand);
    if (v < val) {
      val = v;
      arg = cand;
    }
  }
  if (best) *best = val;
  return arg;
}

}  // namespace

std::optional<std::pair<Point, Point>> quadratic_bilinear_saddle(
    const QuadraticBilinearParams& prm) {
  const long dx = prm.x0.size();
  const long dy = prm.y0.size();
  if (!(prm.sigma_x > 0) || !(prm.sigma_y > 0)) return std::nullopt;
  // sx (x - x0) + M y = 0,  M^T x - sy (y - y0) = 0.
  Matrix K = Matrix::Zero(dx + dy, dx + dy);
  K.topLeftCorner(dx, dx) = prm.sigma_x * Matrix::Identity(dx, dx);
  K.topRightCorner(dx, dy) = prm.M;
  K.bottomLeftCorner(dy, dx) = prm.M.transpose();
  K.bottomRightCorner(dy, dy) = -prm.sigma_y * Matrix::Identity(dy, dy);
  Point rhs(dx + dy);
  rhs << prm.sigma_x * prm.x0, -prm.sigma_y * prm.y0;
  const Point z = K.fullPivLu().solve(rhs);
  Point xs = z.head(dx);
  Point ys = z.tail(dy);
  if (prm.set_x && !prm.set_x->contains(xs)) return std::nullopt;
  if (prm.set_y && !prm.set_y->contains(ys)) return std::nullopt;
  return std::make_pair(xs, ys);
}

GamePayoff quadratic_bilinear_payoff(const QuadraticBilinearParams& prm) {
  const long dx = prm.x0.size();
  const long dy = prm.y0.size();
  if (prm.M.rows() != dx || prm.M.cols() != dy) {
    throw DimensionError("quadratic_bilinear_payoff: M must be dim_x by dim_y");
  }
  if (prm.sigma_x < 0 || prm.sigma_y < 0) {
    throw ConfigError("quadratic_bilinear_payoff: negative curvature");
  }
  if (prm.sigma_x == 0 && !prm.set_x) {
    throw ConfigError("quadratic_bilinear_payoff: linear x side needs a bounded set");
  }
  if (prm.sigma_y == 0 && !prm.set_y) {
    throw ConfigError("quadratic_bilinear_payoff: linear y side needs a bounded set");
  }
  if (prm.set_x && prm.set_x->dim() != dx) throw DimensionError("set_x dimension");
  if (prm.set_y && prm.set_y->dim() != dy) throw DimensionError("set_y dimension");

  const Matrix M = prm.M;
  const double sx = prm.sigma_x;
  const double sy = prm.sigma_y;
  const Point x0 = prm.x0;
  const Point y0 = prm.y0;
  const auto set_x = prm.set_x;
  const auto set_y = prm.set_y;

  GamePayoff P;
  P.name = "quadratic-bilinear";
  P.dim_x = static_cast<int>(dx);
  P.dim_y = static_cast<int>(dy);
  P.set_x = set_x;
  P.set_y = set_y;
  P.linear_in_x = sx == 0;
  P.linear_in_y = sy == 0;
  P.cross_affine = true;
  P.g = [=](const Point& x, const Point& y) {
    return 0.5 * sx * (x - x0).squaredNorm() + x.dot(M * y) - 0.5 * sy * (y - y0).squaredNorm();
  };
  P.grad_x = [=](const Point& x, const Point& y) -> Point { return sx * (x - x0) + M * y; };
  P.grad_y = [=](const Point& x, const Point& y) -> Point {
    return M.transpose() * x - sy * (y - y0);
  };
  P.best_response_x = [=](const Point& y) -> Point {
    if (sx == 0) return set_argmin(*set_x, M * y);
    return project_or_identity(set_x, x0 - M * y / sx);
  };
  P.best_response_y = [=](const Point& x) -> Point {
    if (sy == 0) return set_argmax(*set_y, M.transpose() * x);
    return project_or_identity(set_y, y0 + M.transpose() * x / sy);
  };
  // Both weighted problems only see the weighted mean of the opponent.
  const auto brx = P.best_response_x;
  const auto bry = P.best_response_y;
  P.argmin_weighted_x = [brx](const std::vector<double>& w, const std::vector<Point>& ys) {
    return brx(weighted_mean(w, ys));
  };
  P.argmax_weighted_y = [bry](const std::vector<double>& w, const std::vector<Point>& xs) {
    return bry(weighted_mean(w, xs));
  };

  const double m_norm = spectral_norm(M);
  GameConstants k;
  k.L = sx > 0 ? sx : 1.0;
  k.sigma_x = sx;
  k.sigma_y = sy;
  k.D = set_x ? set_x->diameter() : 1.0;
  if (set_x && set_y) {
    k.G = sx * (set_radius(*set_x) + x0.norm()) + m_norm * set_radius(*set_y);
    if (!(k.G > 0)) k.G = 1.0;
  }
  P.constants = k;

  // Best responses of an unconstrained side stay in a box around its centre.
  if (!set_y && set_x && sy > 0) {
    const double reach = m_norm * set_radius(*set_x) / sy;
    P.search_y = SearchBox{y0.array() - reach, y0.array() + reach};
  }
  if (!set_x && set_y && sx > 0) {
    const double reach = m_norm * set_radius(*set_y) / sx;
    P.search_x = SearchBox{x0.array() - reach, x0.array() + reach};
  }

  if (auto saddle = quadratic_bilinear_saddle(prm)) {
    P.value = P.g(saddle->first, saddle->second);
  }
  return P;
}

GamePayoff bilinear_box_payoff(const Matrix& M, const ConvexSet& box_x,
                               const ConvexSet& box_y) {
  if (box_x.kind() != ConvexSet::Kind::Box || box_y.kind() != ConvexSet::Kind::Box) {
    throw ConfigError("bilinear_box_payoff: both sets must be boxes");
  }
  QuadraticBilinearParams prm;
  prm.M = M;
  prm.sigma_x = 0.0;
  prm.sigma_y = 0.0;
  prm.x0 = Point::Zero(box_x.dim());
  prm.y0 = Point::Zero(box_y.dim());
  prm.set_x = box_x;
  prm.set_y = box_y;
  GamePayoff P = quadratic_bilinear_payoff(prm);
  P.name = "bilinear";
  // Symmetric boxes: x = 0 and y = 0 certify value 0.
  if (box_x.lower().isApprox(-box_x.upper()) && box_y.lower().isApprox(-box_y.upper())) {
    P.value = 0.0;
  }
  return P;
}

Point golden_section_argmin(const std::function<double(const Point&)>& f,
                            const ConvexSet& set, double tol) {
  const Point lo = set.bbox_lower();
  const Point hi = set.bbox_upper();
  if (set.dim() == 1) {
    Point x(1);
    const double t = golden_1d([&](double s) { x[0] = s; return f(x); }, lo[0], hi[0], tol,
                               nullptr);
    x[0] = t;
    return x;
  }
  if (set.dim() != 2) throw UnsupportedOperation("golden_section_argmin: dims > 2");

  // Feasible range of the second coordinate given the first.
  auto range = [&](double a) -> std::pair<double, double> {
    if (set.kind() == ConvexSet::Kind::Box) return {lo[1], hi[1]};
    const double p = set.p();
    const double rest = std::pow(set.radius(), p) - std::pow(std::abs(a), p);
    const double b = rest > 0 ? std::pow(rest, 1.0 / p) : 0.0;
    return {-b, b};
  };
  Point x(2);
  auto inner = [&](double a, double* val) {
    const auto [l, h] = range(a);
    Point z(2);
    z[0] = a;
    return golden_1d([&](double s) { z[1] = s; return f(z); }, l, h, tol, val);
  };
  const double a = golden_1d(
      [&](double s) {
        double v = 0.0;
        inner(s, &v);
        return v;
      },
      lo[0], hi[0], tol, nullptr);
  x[0] = a;
  x[1] = inner(a, nullptr);
  return x;
}

}  // namespace fwgame
