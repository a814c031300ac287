#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>

namespace sharp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Problem interface shared by every solver: f = smooth + nonsmooth.
///
/// The smooth callable returns the smooth part's value and, when `grad` is
/// non-null, writes a (sub)gradient into it. The nonsmooth part is optional;
/// when absent its value is zero and its prox is the identity. Instances are
/// immutable and safe to share between threads as long as the callables are.
class ProximalOracle {
 public:
  using SmoothFn = std::function<double(const Vector& x, Vector* grad)>;
  using ValueFn = std::function<double(const Vector& x)>;
  using ProxFn = std::function<Vector(const Vector& x, double step)>;

  ProximalOracle(Index dimension, SmoothFn smooth, ValueFn nonsmooth_value = {},
                 ProxFn prox = {});

  Index dimension() const noexcept { return dimension_; }
  bool composite() const noexcept { return static_cast<bool>(prox_); }

  double value(const Vector& x) const;
  double smooth_value(const Vector& x) const;
  double smooth_value_and_gradient(const Vector& x, Vector& grad) const;
  Vector smooth_gradient(const Vector& x) const;
  double nonsmooth_value(const Vector& x) const;
  /// argmin_u h(u) + |u - x|^2 / (2 step).
  Vector prox(const Vector& x, double step) const;

 private:
  Index dimension_;
  SmoothFn smooth_;
  ValueFn nonsmooth_;
  ProxFn prox_;
};

/// Hölder smoothness (s, L) and sharpness (r, mu) of a problem.
struct RegularityParams {
  double s;
  double L;
  double r;
  double mu;
  std::optional<double> f_star;
  std::optional<double> gap0;

  /// Throws InvalidArgument unless 1 <= s <= 2, s <= r, L > 0, mu > 0.
  RegularityParams(double s, double L, double r, double mu,
                   std::optional<double> f_star = std::nullopt,
                   std::optional<double> gap0 = std::nullopt);

  void validate() const;
};

struct DerivedConditioning {
  double kappa;  // L^{2/s} / mu^{2/r}
  double tau;    // 1 - s/r
  double q;      // (3s - 2) / 2
  double s;
};

DerivedConditioning derive_conditioning(const RegularityParams& params);

/// Universal constant in the accelerated-gradient bound f - f* <= c L d^2 / t^2.
inline constexpr double kAcceleratedConstant = 4.0;

/// Universal constant 2^{(4s-2)/s} of the universal fast gradient bound.
double universal_constant(double s);

using DistanceFn = std::function<double(const Vector& x)>;

/// True iff mu d(x, X*)^r <= f(x) - f* at every point (up to 1e-12 relative
/// rounding slack). Throws Unavailable when f* is not set.
bool check_sharpness_bound(const ProximalOracle& oracle, const RegularityParams& params,
                           std::span<const Vector> points, const DistanceFn& distance);

/// True iff f(x) - f* <= (L/s) d(x, X*)^s at every point (same slack).
bool check_smoothness_upper_bound(const ProximalOracle& oracle, const RegularityParams& params,
                                  std::span<const Vector> points, const DistanceFn& distance);

}  // namespace sharp
