#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sharp/core.hpp"
#include "sharp/solvers.hpp"

namespace sharp {

/// Restart schedule t_k = C e^{alpha k}, k >= 1.
struct Schedule {
  enum class Kind { kConstant, kGeometric };

  Kind kind = Kind::kConstant;
  double C = 1.0;
  double alpha = 0.0;
  bool rounding = true;  // emit ceil(C e^{alpha k}) instead of the real value

  static Schedule constant(double C);
  static Schedule geometric(double C, double alpha);

  void validate() const;
  /// C e^{alpha k} (alpha forced to 0 for constant schedules).
  double real_length(int k) const;
  /// Iterations actually consumed by cycle k: max(1, ceil(C e^{alpha k})),
  /// saturated at INT64_MAX / 4.
  std::int64_t length(int k) const;
};

/// Optimal schedule of the smooth case: C = C*_{kappa,tau}, alpha = tau.
/// Requires s = 2.
Schedule optimal_schedule_smooth(const DerivedConditioning& cond, double gap0, double c);

struct HolderSchedule {
  Schedule schedule;
  double gamma;
};

/// Optimal Hölder schedule: C = C*_{kappa,tau,q}, alpha = tau, gamma = q.
HolderSchedule optimal_schedule_holder(const DerivedConditioning& cond, double eps0, double c);

struct RestartOptions : SolverOptions {
  /// When false the final cycle runs to its scheduled end even past the budget
  /// (the grid search semantics); iteration_cap still applies.
  bool truncate_final = true;
  std::int64_t iteration_cap = 0;  // 0 = no cap beyond the budget rule
  int max_cycles = 100000;         // criterion restart safety valve
};

/// RESTART: cycles of the accelerated method of lengths t_k, each warm-started
/// from the previous output and the last Lipschitz estimate. Stops at the
/// first R with sum t_k >= N. The last row of every cycle is a restart marker.
Trace restart_scheduled(const ProximalOracle& oracle, const Vector& x0, const Schedule& schedule,
                        std::int64_t N, double L0, const RestartOptions& options = {});

/// H-RESTART: cycle k runs the universal method with eps_k = e^{-gamma k} eps0.
Trace h_restart(const ProximalOracle& oracle, const Vector& x0, double eps0, double gamma,
                const Schedule& schedule, std::int64_t N, double L0,
                const RestartOptions& options = {});

/// eps-RESTART: cycle k runs the universal method with eps_k until
/// f(y) - f_star <= eps_k, where eps_0 = f(x0) - f_star. The gap column of
/// the trace is always filled (f_star is known here).
Trace criterion_restart(const ProximalOracle& oracle, const Vector& x0, double f_star,
                        double gamma, std::int64_t N, double L0,
                        const RestartOptions& options = {});

/// Function-value restart heuristic: restart the accelerated method at the
/// current iterate whenever f increases between accepted iterates.
Trace monotone_restart(const ProximalOracle& oracle, const Vector& x0, std::int64_t N, double L0,
                       const SolverOptions& options = {});

struct GridRun {
  int i = 0;  // C_i = 2^i
  int j = 0;  // alpha = 2^{-j}; j = 0 means a constant schedule
  Schedule schedule;
  Trace trace;
  std::int64_t inner_iterations = 0;  // N'
  bool capped = false;                // stopped at 2N before sum t_k >= N
  bool failed = false;
  std::string error;
};

struct GridOutcome {
  std::vector<GridRun> runs;  // row-major over (i, j)
  std::size_t best = 0;       // index into runs
  std::int64_t total_inner_iterations = 0;

  const GridRun& best_run() const { return runs.at(best); }
  const GridRun* find(int i, int j) const;
};

/// Grid ranges used by adaptive_grid for budget N: i in [1, floor(log2 N)],
/// j in [0, ceil(log2 N)].
int grid_i_max(std::int64_t N);
int grid_j_max(std::int64_t N);

/// Logarithmic grid search over schedules 2^i e^{2^{-j} k}. Runs are
/// independent and executed on up to `threads` workers (0 = hardware
/// concurrency); the result does not depend on the thread count.
GridOutcome adaptive_grid(const ProximalOracle& oracle, const Vector& x0, std::int64_t N,
                          double L0, const SolverOptions& options = {}, unsigned threads = 0);

}  // namespace sharp
