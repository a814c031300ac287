#include "sharp/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fast_gradient.hpp"
#include "sharp/error.hpp"

namespace sharp {

std::optional<double> Trace::final_gap() const {
  if (!f_star) return std::nullopt;
  return final_value() - *f_star;
}

std::int64_t Trace::restart_count() const {
  std::int64_t n = 0;
  for (const TraceEntry& e : entries) n += e.restart ? 1 : 0;
  return n;
}

namespace detail {

double descent_rounding_slack(double f_x, double f_y, double linear, double quadratic) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  return 4.0 * kEps * (std::abs(f_x) + std::abs(f_y) + std::abs(linear) + std::abs(quadratic));
}

double halve_estimate(double L_hat) { return std::max(0.5 * L_hat, kMinLipschitzEstimate); }

void check_finite_start(double f0) {
  if (!std::isfinite(f0)) throw DivergenceError("objective is not finite at the starting point");
}

void TraceRecorder::push(double f_value, std::optional<double> epsilon) {
  TraceEntry e;
  e.iteration = trace_.iterations() + 1;
  e.f_value = f_value;
  if (trace_.f_star) e.gap = f_value - *trace_.f_star;
  e.epsilon_target = epsilon;
  trace_.entries.push_back(e);
}

void TraceRecorder::mark_restart() {
  if (!trace_.entries.empty()) trace_.entries.back().restart = true;
}

FastGradientStepper::FastGradientStepper(const ProximalOracle& oracle, const Vector& x0,
                                         double L0, double epsilon, int max_backtracks)
    : oracle_(oracle),
      center_(x0),
      weighted_gradients_(Vector::Zero(x0.size())),
      y_(x0),
      L_hat_(L0),
      epsilon_(epsilon),
      max_backtracks_(max_backtracks) {
  if (x0.size() != oracle.dimension()) throw InvalidArgument("starting point has wrong dimension");
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument("L0 must be positive");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be nonnegative");
  f_y_ = oracle_.value(y_);
  ++oracle_calls_;
  check_finite_start(f_y_);
  f_initial_ = f_y_;
}

void FastGradientStepper::restart() {
  center_ = y_;
  weighted_gradients_.setZero();
  A_ = 0.0;
}

FastGradientStepper::Status FastGradientStepper::step() {
  const Vector z = A_ > 0.0 ? oracle_.prox(center_ - weighted_gradients_, A_)
                            : Vector(center_ - weighted_gradients_);
  int failures = 0;
  for (;;) {
    // positive root of L a^2 = A + a
    const double a = (1.0 + std::sqrt(1.0 + 4.0 * A_ * L_hat_)) / (2.0 * L_hat_);
    const double tau = a / (A_ + a);
    x_ = tau * z + (1.0 - tau) * y_;
    const double f_x = oracle_.smooth_value_and_gradient(x_, grad_);
    candidate_ = oracle_.prox(x_ - grad_ / L_hat_, 1.0 / L_hat_);
    const double f_c = oracle_.smooth_value(candidate_);
    oracle_calls_ += 2;

    const Vector step = candidate_ - x_;
    const double linear = grad_.dot(step);
    const double quadratic = 0.5 * L_hat_ * step.squaredNorm();
    const double model = f_x + linear + quadratic + 0.5 * tau * epsilon_;
    if (std::isfinite(f_c) && std::isfinite(f_x) &&
        f_c <= model + descent_rounding_slack(f_x, f_c, linear, quadratic)) {
      A_ += a;
      weighted_gradients_ += a * grad_;
      y_ = candidate_;
      f_y_ = f_c + oracle_.nonsmooth_value(y_);
      if (!std::isfinite(f_y_)) throw DivergenceError("objective became non-finite");
      L_hat_ = halve_estimate(L_hat_);
      return Status::kAccepted;
    }
    L_hat_ *= 2.0;
    ++backtracks_;
    if (++failures > max_backtracks_ || !std::isfinite(L_hat_)) return Status::kStalled;
  }
}

}  // namespace detail

Trace gradient_descent(const ProximalOracle& oracle, const Vector& x0, double L0,
                       std::int64_t budget, const SolverOptions& options) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument("L0 must be positive");
  if (x0.size() != oracle.dimension()) throw InvalidArgument("starting point has wrong dimension");

  Trace trace;
  detail::TraceRecorder recorder(trace, options.f_star);
  Vector x = x0;
  Vector grad;
  double f_smooth = oracle.smooth_value_and_gradient(x, grad);
  double f = f_smooth + oracle.nonsmooth_value(x);
  detail::check_finite_start(f);
  trace.initial_value = f;
  trace.oracle_calls = 1;
  double L_hat = L0;
  bool need_gradient = false;

  for (std::int64_t t = 0; t < budget; ++t) {
    if (need_gradient) {
      f_smooth = oracle.smooth_value_and_gradient(x, grad);
      ++trace.oracle_calls;
    }
    int failures = 0;
    Vector candidate;
    double f_c = 0.0;
    for (;;) {
      candidate = oracle.prox(x - grad / L_hat, 1.0 / L_hat);
      f_c = oracle.smooth_value(candidate);
      ++trace.oracle_calls;
      const Vector step = candidate - x;
      const double linear = grad.dot(step);
      const double quadratic = 0.5 * L_hat * step.squaredNorm();
      if (std::isfinite(f_c) &&
          f_c <= f_smooth + linear + quadratic +
                     detail::descent_rounding_slack(f_smooth, f_c, linear, quadratic))
        break;
      L_hat *= 2.0;
      ++trace.backtracks;
      if (++failures > options.max_backtracks || !std::isfinite(L_hat)) {
        trace.stalled = true;
        trace.diagnostics.push_back("line search gave up after " + std::to_string(failures) +
                                    " doublings at iteration " + std::to_string(t + 1));
        break;
      }
    }
    if (trace.stalled) break;
    x = std::move(candidate);
    f_smooth = f_c;
    f = f_c + oracle.nonsmooth_value(x);
    if (!std::isfinite(f)) throw DivergenceError("objective became non-finite");
    L_hat = detail::halve_estimate(L_hat);
    need_gradient = true;
    recorder.push(f);
  }
  trace.final_point = std::move(x);
  trace.final_L_hat = L_hat;
  return trace;
}

Trace universal_fast_gradient(const ProximalOracle& oracle, const Vector& x0, double epsilon,
                              double L0, std::int64_t budget, const StopPredicate& stop,
                              const SolverOptions& options) {
  if (budget < 1) throw InvalidArgument("budget must be at least 1");
  detail::FastGradientStepper stepper(oracle, x0, L0, epsilon, options.max_backtracks);
  Trace trace;
  detail::TraceRecorder recorder(trace, options.f_star);
  trace.initial_value = stepper.initial_value();

  for (std::int64_t t = 0; t < budget; ++t) {
    if (stepper.step() == detail::FastGradientStepper::Status::kStalled) {
      trace.stalled = true;
      trace.diagnostics.push_back("line search gave up at iteration " + std::to_string(t + 1));
      break;
    }
    recorder.push(stepper.value(), epsilon > 0.0 ? std::optional<double>(epsilon) : std::nullopt);
    if (stop && stop(stepper.point(), stepper.value())) {
      trace.stopped = true;
      break;
    }
  }
  trace.final_point = stepper.point();
  trace.final_L_hat = stepper.L_hat();
  trace.backtracks = stepper.backtracks();
  trace.oracle_calls = stepper.oracle_calls();
  return trace;
}

Trace accelerated(const ProximalOracle& oracle, const Vector& x0, double L0, std::int64_t t,
                  const SolverOptions& options) {
  return universal_fast_gradient(oracle, x0, 0.0, L0, t, {}, options);
}

}  // namespace sharp
