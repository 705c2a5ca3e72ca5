#include "fwgame/harness.hpp"

#include <algorithm>
#include <cmath>

namespace fwgame {

RateFit fit_rate(const std::vector<std::pair<double, double>>& series, RateModel model) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [T, err] : series) {
    if (!(err > kFitFloor) || !std::isfinite(err)) continue;
    if (model == RateModel::PowerLaw && !(T > 0)) continue;
    xs.push_back(model == RateModel::PowerLaw ? std::log(T) : T);
    ys.push_back(std::log(err));
  }
  const int n = static_cast<int>(xs.size());
  if (n < 3) {
    throw FitError("fit_rate: " + std::to_string(n) + " points above the 1e-12 floor, need 3");
  }
  double mx = 0.0;
  double my = 0.0;
  for (int i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw FitError("fit_rate: all abscissae coincide");

  RateFit fit;
  fit.model = model;
  fit.points_used = n;
  fit.slope_or_decay = sxy / sxx;
  fit.intercept = my - fit.slope_or_decay * mx;
  if (syy <= 1e-300) {
    fit.slope_or_decay = 0.0;
    fit.intercept = my;
    fit.r_squared = 1.0;
    return fit;
  }
  double ss_res = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope_or_decay * xs[i]);
    ss_res += r * r;
  }
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

}  // namespace fwgame
