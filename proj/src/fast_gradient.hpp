#pragma once

#include <cstdint>
#include <optional>

#include "sharp/core.hpp"
#include "sharp/solvers.hpp"

namespace sharp::detail {

/// Floating-point allowance added to a descent test so that steps whose true
/// decrease is below the rounding noise of f are not rejected forever.
double descent_rounding_slack(double f_x, double f_y, double linear, double quadratic);

/// Iteration engine of the universal fast gradient method.
///
/// The estimate function is kept as its center x0 and the running weighted
/// gradient sum, so argmin phi_t = prox_{A_t h}(x0 - sum a_i grad f(x_i)).
/// `restart()` starts a fresh estimate function at the current y while
/// keeping the Lipschitz estimate.
class FastGradientStepper {
 public:
  enum class Status { kAccepted, kStalled };

  FastGradientStepper(const ProximalOracle& oracle, const Vector& x0, double L0, double epsilon,
                      int max_backtracks);

  Status step();
  void restart();
  void set_epsilon(double epsilon) { epsilon_ = epsilon; }

  const Vector& point() const noexcept { return y_; }
  double value() const noexcept { return f_y_; }
  double initial_value() const noexcept { return f_initial_; }
  double L_hat() const noexcept { return L_hat_; }
  double accumulated_weight() const noexcept { return A_; }
  std::int64_t backtracks() const noexcept { return backtracks_; }
  std::int64_t oracle_calls() const noexcept { return oracle_calls_; }

 private:
  const ProximalOracle& oracle_;
  Vector center_;
  Vector weighted_gradients_;
  Vector y_;
  double f_y_;
  double f_initial_;
  double A_ = 0.0;
  double L_hat_;
  double epsilon_;
  int max_backtracks_;
  std::int64_t backtracks_ = 0;
  std::int64_t oracle_calls_ = 0;
  // scratch
  Vector x_, grad_, candidate_;
};

/// Appends accepted iterates to a Trace, keeping counts and gaps consistent.
class TraceRecorder {
 public:
  explicit TraceRecorder(Trace& trace, std::optional<double> f_star) : trace_(trace) {
    trace_.f_star = f_star;
  }

  void push(double f_value, std::optional<double> epsilon = std::nullopt);
  void mark_restart();
  std::int64_t count() const noexcept { return trace_.iterations(); }

 private:
  Trace& trace_;
};

/// Lower limit of the Lipschitz estimate. Once the iterates sit at a point
/// with zero gradient every step is accepted; without a floor the halving
/// would drive 1/L_hat to infinity and the next step to NaN.
inline constexpr double kMinLipschitzEstimate = 1e-300;

double halve_estimate(double L_hat);

void check_finite_start(double f0);

}  // namespace sharp::detail
