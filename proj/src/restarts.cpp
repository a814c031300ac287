#include "sharp/restarts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "fast_gradient.hpp"
#include "sharp/bounds.hpp"
#include "sharp/error.hpp"

namespace sharp {

namespace {

constexpr std::int64_t kLengthCeiling = std::numeric_limits<std::int64_t>::max() / 4;

void check_common(const ProximalOracle& oracle, const Vector& x0, std::int64_t N, double L0) {
  if (N < 1) throw InvalidArgument("budget N must be at least 1");
  if (!(L0 > 0.0) || !std::isfinite(L0)) throw InvalidArgument("L0 must be positive");
  if (x0.size() != oracle.dimension()) throw InvalidArgument("starting point has wrong dimension");
}

void finish(Trace& trace, const detail::FastGradientStepper& stepper) {
  trace.final_point = stepper.point();
  trace.final_L_hat = stepper.L_hat();
  trace.backtracks = stepper.backtracks();
  trace.oracle_calls = stepper.oracle_calls();
}

// Shared driver of RESTART and H-RESTART. `epsilon(k)` is the target of cycle k.
Trace run_schedule(const ProximalOracle& oracle, const Vector& x0, const Schedule& schedule,
                   std::int64_t N, double L0, const RestartOptions& options,
                   const std::function<double(int)>& epsilon, bool record_epsilon) {
  check_common(oracle, x0, N, L0);
  schedule.validate();
  std::int64_t cap = options.truncate_final ? N : kLengthCeiling;
  if (options.iteration_cap > 0) cap = std::min(cap, options.iteration_cap);

  detail::FastGradientStepper stepper(oracle, x0, L0, epsilon(1), options.max_backtracks);
  Trace trace;
  detail::TraceRecorder recorder(trace, options.f_star);
  trace.initial_value = stepper.initial_value();

  for (int k = 1; recorder.count() < N; ++k) {
    const double eps = epsilon(k);
    stepper.set_epsilon(eps);
    const std::int64_t scheduled = schedule.length(k);
    const std::int64_t run = std::min(scheduled, cap - recorder.count());
    CycleRecord cycle;
    cycle.index = k;
    cycle.scheduled = scheduled;
    if (record_epsilon) cycle.epsilon = eps;
    for (std::int64_t t = 0; t < run; ++t) {
      if (stepper.step() == detail::FastGradientStepper::Status::kStalled) {
        trace.stalled = true;
        trace.diagnostics.push_back("line search gave up in cycle " + std::to_string(k));
        break;
      }
      ++cycle.iterations;
      recorder.push(stepper.value(), record_epsilon ? std::optional<double>(eps) : std::nullopt);
    }
    cycle.end_iteration = recorder.count();
    cycle.f_value = stepper.value();
    cycle.completed = cycle.iterations == scheduled;
    if (cycle.iterations > 0) recorder.mark_restart();
    trace.cycles.push_back(cycle);
    if (trace.stalled) break;
    if (!cycle.completed) {
      trace.truncated = true;
      trace.diagnostics.push_back("cycle " + std::to_string(k) + " cut at " +
                                  std::to_string(cycle.iterations) + " of " +
                                  std::to_string(scheduled) + " iterations by the budget");
      break;
    }
    stepper.restart();
  }
  finish(trace, stepper);
  return trace;
}

}  // namespace

Schedule Schedule::constant(double C) {
  Schedule s;
  s.kind = Kind::kConstant;
  s.C = C;
  s.alpha = 0.0;
  s.validate();
  return s;
}

Schedule Schedule::geometric(double C, double alpha) {
  Schedule s;
  s.kind = Kind::kGeometric;
  s.C = C;
  s.alpha = alpha;
  s.validate();
  return s;
}

void Schedule::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("schedule constant C must be positive");
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("schedule rate alpha must be nonnegative");
}

double Schedule::real_length(int k) const {
  const double a = kind == Kind::kConstant ? 0.0 : alpha;
  return C * std::exp(a * k);
}

std::int64_t Schedule::length(int k) const {
  const double t = std::ceil(real_length(k));
  if (!(t < static_cast<double>(kLengthCeiling))) return kLengthCeiling;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
}

Schedule optimal_schedule_smooth(const DerivedConditioning& cond, double gap0, double c) {
  if (cond.s != 2.0) throw InvalidArgument("the smooth schedule requires s = 2");
  return Schedule::geometric(optimal_constant_smooth(cond, gap0, c), cond.tau);
}

HolderSchedule optimal_schedule_holder(const DerivedConditioning& cond, double eps0, double c) {
  return {Schedule::geometric(optimal_constant_holder(cond, eps0, c), cond.tau), cond.q};
}

Trace restart_scheduled(const ProximalOracle& oracle, const Vector& x0, const Schedule& schedule,
                        std::int64_t N, double L0, const RestartOptions& options) {
  return run_schedule(oracle, x0, schedule, N, L0, options, [](int) { return 0.0; }, false);
}

Trace h_restart(const ProximalOracle& oracle, const Vector& x0, double eps0, double gamma,
                const Schedule& schedule, std::int64_t N, double L0,
                const RestartOptions& options) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw InvalidArgument("eps0 must be positive");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be nonnegative");
  return run_schedule(
      oracle, x0, schedule, N, L0, options,
      [eps0, gamma](int k) { return eps0 * std::exp(-gamma * k); }, true);
}

Trace criterion_restart(const ProximalOracle& oracle, const Vector& x0, double f_star,
                        double gamma, std::int64_t N, double L0, const RestartOptions& options) {
  check_common(oracle, x0, N, L0);
  if (!std::isfinite(f_star)) throw InvalidArgument("f_star must be finite");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InvalidArgument("gamma must be nonnegative");

  detail::FastGradientStepper stepper(oracle, x0, L0, 0.0, options.max_backtracks);
  Trace trace;
  detail::TraceRecorder recorder(trace, f_star);
  trace.initial_value = stepper.initial_value();

  const double eps0 = stepper.initial_value() - f_star;
  if (eps0 < 0.0)
    trace.diagnostics.push_back("f(x0) is below f_star: the supplied optimum is too high");
  double eps = eps0;
  const double decay = std::exp(-gamma);
  for (int k = 1; eps0 > 0.0 && k <= options.max_cycles; ++k) {
    const double gap = stepper.value() - f_star;
    if (gap <= 0.0) {
      if (gap < 0.0)
        trace.diagnostics.push_back("objective fell below f_star in cycle " +
                                    std::to_string(k - 1) + ": the supplied optimum is too high");
      break;
    }
    if (recorder.count() >= N) break;
    eps *= decay;
    stepper.set_epsilon(eps);
    CycleRecord cycle;
    cycle.index = k;
    cycle.epsilon = eps;
    bool reached = stepper.value() - f_star <= eps;
    while (!reached && recorder.count() < N) {
      if (stepper.step() == detail::FastGradientStepper::Status::kStalled) {
        trace.stalled = true;
        trace.diagnostics.push_back("line search gave up in cycle " + std::to_string(k));
        break;
      }
      ++cycle.iterations;
      recorder.push(stepper.value(), eps);
      reached = stepper.value() - f_star <= eps;
    }
    cycle.end_iteration = recorder.count();
    cycle.f_value = stepper.value();
    cycle.completed = reached;
    if (cycle.iterations > 0) recorder.mark_restart();
    trace.cycles.push_back(cycle);
    if (trace.stalled) break;
    if (!reached) {
      trace.truncated = true;
      trace.diagnostics.push_back("budget exhausted before reaching eps_" + std::to_string(k) +
                                  "; if this persists the supplied optimum may be too low");
      break;
    }
    stepper.restart();
    if (gamma == 0.0 && cycle.iterations == 0) break;  // eps_k never decreases
  }
  if (eps0 > 0.0 && static_cast<int>(trace.cycles.size()) >= options.max_cycles)
    trace.diagnostics.push_back("stopped after the maximum number of cycles");
  finish(trace, stepper);
  return trace;
}

Trace monotone_restart(const ProximalOracle& oracle, const Vector& x0, std::int64_t N, double L0,
                       const SolverOptions& options) {
  check_common(oracle, x0, N, L0);
  detail::FastGradientStepper stepper(oracle, x0, L0, 0.0, options.max_backtracks);
  Trace trace;
  detail::TraceRecorder recorder(trace, options.f_star);
  trace.initial_value = stepper.initial_value();
  double previous = stepper.value();
  int cycle_index = 1;
  std::int64_t cycle_start = 0;
  auto close_cycle = [&](bool completed) {
    CycleRecord cycle;
    cycle.index = cycle_index++;
    cycle.iterations = recorder.count() - cycle_start;
    cycle.end_iteration = recorder.count();
    cycle.f_value = stepper.value();
    cycle.completed = completed;
    trace.cycles.push_back(cycle);
    cycle_start = recorder.count();
  };
  while (recorder.count() < N) {
    if (stepper.step() == detail::FastGradientStepper::Status::kStalled) {
      trace.stalled = true;
      trace.diagnostics.push_back("line search gave up at iteration " +
                                  std::to_string(recorder.count() + 1));
      break;
    }
    recorder.push(stepper.value());
    if (stepper.value() > previous && recorder.count() < N) {
      recorder.mark_restart();
      close_cycle(true);
      stepper.restart();
    }
    previous = stepper.value();
  }
  if (recorder.count() > cycle_start) close_cycle(false);
  finish(trace, stepper);
  return trace;
}

const GridRun* GridOutcome::find(int i, int j) const {
  for (const GridRun& r : runs)
    if (r.i == i && r.j == j) return &r;
  return nullptr;
}

int grid_i_max(std::int64_t N) {
  int i = 0;
  while ((std::int64_t{2} << i) <= N) ++i;
  return i;  // floor(log2 N)
}

int grid_j_max(std::int64_t N) {
  int j = 0;
  while ((std::int64_t{1} << j) < N) ++j;
  return j;  // ceil(log2 N)
}

GridOutcome adaptive_grid(const ProximalOracle& oracle, const Vector& x0, std::int64_t N,
                          double L0, const SolverOptions& options, unsigned threads) {
  if (N < 4) throw InvalidArgument("grid search needs N >= 4");
  check_common(oracle, x0, N, L0);
  GridOutcome out;
  const int imax = grid_i_max(N);
  const int jmax = grid_j_max(N);
  for (int i = 1; i <= imax; ++i)
    for (int j = 0; j <= jmax; ++j) {
      GridRun run;
      run.i = i;
      run.j = j;
      const double C = std::ldexp(1.0, i);
      run.schedule = j == 0 ? Schedule::constant(C) : Schedule::geometric(C, std::ldexp(1.0, -j));
      out.runs.push_back(std::move(run));
    }

  RestartOptions ropts;
  static_cast<SolverOptions&>(ropts) = options;
  ropts.truncate_final = false;
  ropts.iteration_cap = 2 * N;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < out.runs.size(); k = next++) {
      GridRun& run = out.runs[k];
      try {
        run.trace = restart_scheduled(oracle, x0, run.schedule, N, L0, ropts);
        run.inner_iterations = run.trace.iterations();
        run.capped = run.trace.truncated;
      } catch (const std::exception& e) {
        run.failed = true;
        run.error = e.what();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(out.runs.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  // deterministic reduction: lowest final value, ties by smaller i then j (row-major order)
  bool have = false;
  for (std::size_t k = 0; k < out.runs.size(); ++k) {
    const GridRun& run = out.runs[k];
    out.total_inner_iterations += run.inner_iterations;
    if (run.failed) continue;
    if (!have || run.trace.final_value() < out.runs[out.best].trace.final_value()) {
      out.best = k;
      have = true;
    }
  }
  if (!have) throw Error("every grid run failed: " + out.runs.front().error);
  return out;
}

}  // namespace sharp
