#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fwgame {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

// Raised when an adaptive weight would be built from a gradient below the
// floor. Usually means the instance has no positive lower bound B on its
// gradient norms (optimum in the interior).
class DegenerateGradientError : public Error {
 public:
  DegenerateGradientError(const std::string& what, int round = 0)
      : Error(what), round_(round) {}
  int round() const { return round_; }

 private:
  int round_;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

bool is_finite(const Point& p);
void require_finite(const Point& p, const char* what);
void require_same_dim(const Point& a, const Point& b, const char* what);

Point weighted_average(const std::vector<Point>& points,
                       const std::vector<double>& weights);

enum class WeightKind { Uniform, Linear, AdaptiveInvGradSq };

struct WeightSchedule {
  WeightKind kind = WeightKind::Uniform;
  double floor = 1e-10;

  bool adaptive() const { return kind == WeightKind::AdaptiveInvGradSq; }
};

double emit_weight(const WeightSchedule& schedule, int t,
                   const Point* grad = nullptr);

std::string to_string(WeightKind kind);

struct SmoothObjective {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;
  double L = 1.0;
  double sigma = 0.0;
  // Inverse of the gradient map, i.e. the gradient of the conjugate f*.
  // Only available when sigma > 0.
  std::function<Point(const Point&)> conjugate_gradient;

  // f*(x) = <x, u> - f(u) with u = grad f*(x).
  double conjugate_value(const Point& x) const;
};

// f(y) = 1/2 (y - c)^T H (y - c) with H symmetric positive semidefinite.
SmoothObjective quadratic_objective(const Matrix& H, const Point& c);
SmoothObjective isotropic_quadratic(const Point& c, double scale = 1.0);

// Central differences with step 1e-6 (1 + |x|).
Point finite_difference_gradient(const std::function<double(const Point&)>& f,
                                 const Point& x);

struct GameConstants {
  double L = 1.0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double G = 1.0;
  double B = 0.0;
  double D = 1.0;

  void validate() const;
};

}  // namespace fwgame
