#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sharp/core.hpp"

namespace sharp {

struct TraceEntry {
  std::int64_t iteration;  // cumulative accepted inner iterations, starting at 1
  double f_value;
  std::optional<double> gap;
  bool restart = false;
  std::optional<double> epsilon_target;
};

/// One restart cycle of a meta-scheme. `end_iteration` is the cumulative
/// count at the restart point x_k.
struct CycleRecord {
  int index = 0;
  std::int64_t scheduled = 0;  // t_k requested (0 for criterion cycles)
  std::int64_t iterations = 0;
  std::int64_t end_iteration = 0;
  double f_value = 0.0;
  std::optional<double> epsilon;
  bool completed = true;  // false when cut by the budget or the line search
};

/// Per-iteration record produced by every solver and restart scheme.
///
/// Rows correspond to accepted iterations only; line-search backtracks are
/// counted in `backtracks` and `oracle_calls`.
struct Trace {
  std::vector<TraceEntry> entries;
  Vector final_point;
  double final_L_hat = 0.0;
  double initial_value = 0.0;
  std::optional<double> f_star;
  std::int64_t backtracks = 0;
  std::int64_t oracle_calls = 0;
  std::vector<CycleRecord> cycles;
  std::vector<std::string> diagnostics;
  bool stalled = false;    // line search exceeded its backtrack limit
  bool truncated = false;  // final cycle cut by the budget
  bool stopped = false;    // stop predicate fired

  std::int64_t iterations() const { return entries.empty() ? 0 : entries.back().iteration; }
  double final_value() const { return entries.empty() ? initial_value : entries.back().f_value; }
  std::optional<double> final_gap() const;
  std::int64_t restart_count() const;
};

struct SolverOptions {
  std::optional<double> f_star;  // fills TraceEntry::gap when set
  int max_backtracks = 128;      // consecutive doublings before giving up
};

/// Gradient descent with the doubling/halving Lipschitz line search.
/// Composite oracles take proximal steps; the descent test uses the smooth part.
Trace gradient_descent(const ProximalOracle& oracle, const Vector& x0, double L0,
                       std::int64_t budget, const SolverOptions& options = {});

using StopPredicate = std::function<bool(const Vector& point, double f_value)>;

/// Universal fast gradient method with target accuracy `epsilon`.
///
/// Runs at most `budget` accepted iterations; if `stop` is given, returns at
/// the first accepted iterate satisfying it (Trace::stopped is then set and
/// Trace::iterations() is the count t_eps). Trace::final_point is y_T.
/// With epsilon = 0 and a nonsmooth objective there is no termination
/// guarantee; the run simply uses the whole budget.
Trace universal_fast_gradient(const ProximalOracle& oracle, const Vector& x0, double epsilon,
                              double L0, std::int64_t budget, const StopPredicate& stop = {},
                              const SolverOptions& options = {});

/// Accelerated gradient method A(x0, t) = U(x0, 0, t).
Trace accelerated(const ProximalOracle& oracle, const Vector& x0, double L0, std::int64_t t,
                  const SolverOptions& options = {});

}  // namespace sharp
