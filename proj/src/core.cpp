#include "sharp/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "sharp/error.hpp"

namespace sharp {

ProximalOracle::ProximalOracle(Index dimension, SmoothFn smooth, ValueFn nonsmooth_value,
                               ProxFn prox)
    : dimension_(dimension),
      smooth_(std::move(smooth)),
      nonsmooth_(std::move(nonsmooth_value)),
      prox_(std::move(prox)) {
  if (dimension_ < 1) throw InvalidArgument("oracle dimension must be positive");
  if (!smooth_) throw InvalidArgument("oracle needs a smooth part");
}

double ProximalOracle::value(const Vector& x) const {
  return smooth_value(x) + nonsmooth_value(x);
}

double ProximalOracle::smooth_value(const Vector& x) const { return smooth_(x, nullptr); }

double ProximalOracle::smooth_value_and_gradient(const Vector& x, Vector& grad) const {
  grad.resize(dimension_);
  return smooth_(x, &grad);
}

Vector ProximalOracle::smooth_gradient(const Vector& x) const {
  Vector grad(dimension_);
  smooth_(x, &grad);
  return grad;
}

double ProximalOracle::nonsmooth_value(const Vector& x) const {
  return nonsmooth_ ? nonsmooth_(x) : 0.0;
}

Vector ProximalOracle::prox(const Vector& x, double step) const {
  return prox_ ? prox_(x, step) : x;
}

RegularityParams::RegularityParams(double s_, double L_, double r_, double mu_,
                                   std::optional<double> f_star_, std::optional<double> gap0_)
    : s(s_), L(L_), r(r_), mu(mu_), f_star(f_star_), gap0(gap0_) {
  validate();
}

void RegularityParams::validate() const {
  if (!(s >= 1.0 && s <= 2.0)) throw InvalidArgument("smoothness exponent s must lie in [1, 2]");
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("smoothness constant L must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("sharpness constant mu must be positive");
  if (!(r >= s))
    throw InvalidArgument("inconsistent regularity: sharpness exponent r=" + std::to_string(r) +
                          " is below smoothness exponent s=" + std::to_string(s));
  if (gap0 && !(*gap0 > 0.0)) throw InvalidArgument("gap0 must be positive");
}

DerivedConditioning derive_conditioning(const RegularityParams& params) {
  params.validate();
  DerivedConditioning out;
  out.kappa = std::pow(params.L, 2.0 / params.s) / std::pow(params.mu, 2.0 / params.r);
  out.tau = 1.0 - params.s / params.r;
  out.q = (3.0 * params.s - 2.0) / 2.0;
  out.s = params.s;
  return out;
}

double universal_constant(double s) {
  if (!(s >= 1.0 && s <= 2.0)) throw InvalidArgument("s must lie in [1, 2]");
  return std::exp2((4.0 * s - 2.0) / s);
}

namespace {

double require_f_star(const RegularityParams& params) {
  if (!params.f_star) throw Unavailable("f* is not known; the bound cannot be checked");
  return *params.f_star;
}

double slack(double f) { return 1e-12 * std::max(1.0, std::abs(f)); }

}  // namespace

bool check_sharpness_bound(const ProximalOracle& oracle, const RegularityParams& params,
                           std::span<const Vector> points, const DistanceFn& distance) {
  const double f_star = require_f_star(params);
  for (const Vector& x : points) {
    const double f = oracle.value(x);
    const double lower = params.mu * std::pow(distance(x), params.r);
    if (lower > f - f_star + slack(f)) return false;
  }
  return true;
}

bool check_smoothness_upper_bound(const ProximalOracle& oracle, const RegularityParams& params,
                                  std::span<const Vector> points, const DistanceFn& distance) {
  const double f_star = require_f_star(params);
  for (const Vector& x : points) {
    const double f = oracle.value(x);
    const double upper = params.L / params.s * std::pow(distance(x), params.s);
    if (f - f_star > upper + slack(f)) return false;
  }
  return true;
}

}  // namespace sharp
