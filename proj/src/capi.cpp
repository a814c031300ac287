#include "sharp/sharp.h"

#include <cmath>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "sharp/bounds.hpp"
#include "sharp/error.hpp"
#include "sharp/problems.hpp"
#include "sharp/restarts.hpp"
#include "sharp/solvers.hpp"
#include "sharp/trace_io.hpp"

struct sharp_problem {
  sharp::ProblemInstance instance;
  std::string notes;
};

struct sharp_trace {
  sharp::Trace trace;
  std::string diagnostics;
};

struct sharp_grid {
  sharp::GridOutcome outcome;
  std::vector<sharp_trace> traces;
};

namespace {

thread_local std::string last_error;

sharp_status fail(sharp_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps library exceptions onto status codes; every entry point goes through here.
template <typename F>
sharp_status guarded(F&& body) {
  try {
    body();
    return SHARP_OK;
  } catch (const sharp::InvalidArgument& e) {
    return fail(SHARP_ERR_INVALID_ARGUMENT, e.what());
  } catch (const sharp::IoError& e) {
    return fail(SHARP_ERR_IO, e.what());
  } catch (const sharp::ParseError& e) {
    return fail(SHARP_ERR_PARSE, e.what());
  } catch (const sharp::DivergenceError& e) {
    return fail(SHARP_ERR_DIVERGENCE, e.what());
  } catch (const sharp::Unavailable& e) {
    return fail(SHARP_ERR_UNAVAILABLE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SHARP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SHARP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SHARP_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* message) {
  if (!ok) throw sharp::InvalidArgument(message);
}

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

sharp_problem* wrap(sharp::ProblemInstance instance) {
  auto* p = new sharp_problem{std::move(instance), {}};
  p->notes = join(p->instance.notes);
  return p;
}

sharp_trace wrap_trace(sharp::Trace trace) {
  sharp_trace t{std::move(trace), {}};
  t.diagnostics = join(t.trace.diagnostics);
  return t;
}

sharp::ProblemInstance from_data(const sharp::Dataset& data, sharp_loss loss, double reg) {
  switch (loss) {
    case SHARP_LOSS_LEAST_SQUARES: return sharp::make_least_squares(data);
    case SHARP_LOSS_LOGISTIC: return sharp::make_logistic(data);
    case SHARP_LOSS_LASSO: return sharp::make_lasso(data, reg);
    case SHARP_LOSS_DUAL_SVM: return sharp::make_dual_svm(data, reg);
  }
  throw sharp::InvalidArgument("unknown loss");
}

// Resolved view of sharp_run_options against a problem.
struct RunSetup {
  sharp::Vector x0;
  double L0;
  double f0;
  std::optional<double> f_star;
  sharp::SolverOptions solver;
};

RunSetup resolve(const sharp_problem* problem, const sharp_run_options* options) {
  require(problem && options, "null argument");
  const auto& inst = problem->instance;
  RunSetup s;
  if (options->x0) {
    require(options->x0_length == inst.dimension(), "x0 has the wrong length");
    s.x0 = Eigen::Map<const sharp::Vector>(options->x0, options->x0_length);
  } else {
    s.x0 = inst.x0;
  }
  s.L0 = options->has_L0 ? options->L0 : inst.smoothness;
  require(s.L0 > 0.0 && std::isfinite(s.L0), "L0 must be positive");
  require(options->budget >= 1, "budget must be at least 1");
  s.f_star = options->has_f_star ? std::optional<double>(options->f_star) : inst.f_star;
  s.f0 = inst.oracle.value(s.x0);
  s.solver.f_star = s.f_star;
  if (options->max_backtracks > 0) s.solver.max_backtracks = options->max_backtracks;
  return s;
}

sharp::DerivedConditioning conditioning(const sharp_problem* problem) {
  if (!problem->instance.regularity)
    throw sharp::Unavailable("problem '" + problem->instance.name +
                             "' declares no regularity parameters");
  return sharp::derive_conditioning(*problem->instance.regularity);
}

double gap_at_start(const RunSetup& s) {
  if (!s.f_star) throw sharp::Unavailable("f* is unknown; supply f_star");
  const double gap = s.f0 - *s.f_star;
  if (!(gap > 0.0)) throw sharp::InvalidArgument("start is already optimal (f(x0) - f* <= 0)");
  return gap;
}

double default_gamma(const sharp_problem* problem, const sharp_run_options* options) {
  if (options->has_gamma) return options->gamma;
  if (problem->instance.regularity) return conditioning(problem).q;
  return 1.0;
}

sharp::Schedule explicit_schedule(const sharp_run_options* options) {
  return options->alpha == 0.0 ? sharp::Schedule::constant(options->C)
                               : sharp::Schedule::geometric(options->C, options->alpha);
}

sharp::Trace run_method(const sharp_problem* problem, const sharp_run_options* options) {
  const RunSetup s = resolve(problem, options);
  const auto& oracle = problem->instance.oracle;
  sharp::RestartOptions ropts;
  static_cast<sharp::SolverOptions&>(ropts) = s.solver;
  switch (options->method) {
    case SHARP_METHOD_GRAD: return sharp::gradient_descent(oracle, s.x0, s.L0, options->budget, s.solver);
    case SHARP_METHOD_ACC: return sharp::accelerated(oracle, s.x0, s.L0, options->budget, s.solver);
    case SHARP_METHOD_MONO:
      return sharp::monotone_restart(oracle, s.x0, options->budget, s.L0, s.solver);
    case SHARP_METHOD_RESTART: {
      const sharp::Schedule schedule =
          options->has_C ? explicit_schedule(options)
                         : sharp::optimal_schedule_smooth(conditioning(problem), gap_at_start(s),
                                                          sharp::kAcceleratedConstant);
      return sharp::restart_scheduled(oracle, s.x0, schedule, options->budget, s.L0, ropts);
    }
    case SHARP_METHOD_H_RESTART: {
      const double eps0 = options->has_eps0 ? options->eps0 : gap_at_start(s);
      const double gamma = default_gamma(problem, options);
      sharp::Schedule schedule;
      if (options->has_C) {
        schedule = explicit_schedule(options);
      } else {
        const auto cond = conditioning(problem);
        schedule = sharp::optimal_schedule_holder(cond, eps0, sharp::universal_constant(cond.s))
                       .schedule;
      }
      return sharp::h_restart(oracle, s.x0, eps0, gamma, schedule, options->budget, s.L0, ropts);
    }
    case SHARP_METHOD_CRITERION: {
      if (!s.f_star) throw sharp::Unavailable("criterion restart needs f*; supply f_star");
      return sharp::criterion_restart(oracle, s.x0, *s.f_star, default_gamma(problem, options),
                                      options->budget, s.L0, ropts);
    }
    case SHARP_METHOD_GRID: {
      sharp::GridOutcome g = sharp::adaptive_grid(oracle, s.x0, options->budget, s.L0, s.solver);
      return std::move(g.runs[g.best].trace);
    }
  }
  throw sharp::InvalidArgument("unknown method");
}

}  // namespace

extern "C" {

const char* sharp_version(void) { return "1.0.0"; }

const char* sharp_last_error(void) { return last_error.c_str(); }

const char* sharp_status_name(sharp_status status) {
  switch (status) {
    case SHARP_OK: return "ok";
    case SHARP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SHARP_ERR_IO: return "i/o error";
    case SHARP_ERR_PARSE: return "parse error";
    case SHARP_ERR_DIVERGENCE: return "divergence";
    case SHARP_ERR_UNAVAILABLE: return "unavailable";
    case SHARP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

sharp_status sharp_problem_quadratic(int64_t n, double kappa, uint64_t seed, sharp_problem** out) {
  return guarded([&] {
    require(out, "null output handle");
    *out = wrap(sharp::make_quadratic(n, kappa, seed));
  });
}

sharp_status sharp_problem_norm_power(int64_t n, double r, double radius, uint64_t seed,
                                      sharp_problem** out) {
  return guarded([&] {
    require(out, "null output handle");
    *out = wrap(sharp::make_norm_power(n, r, radius, seed));
  });
}

sharp_status sharp_problem_abs(int64_t n, double weight, double radius, uint64_t seed,
                               sharp_problem** out) {
  return guarded([&] {
    require(out, "null output handle");
    *out = wrap(sharp::make_abs(n, weight, radius, seed));
  });
}

sharp_status sharp_problem_synthetic(sharp_loss loss, int64_t rows, int64_t cols,
                                     double condition, double noise, uint64_t seed,
                                     double regularization, sharp_problem** out) {
  return guarded([&] {
    require(out, "null output handle");
    sharp::SyntheticSpec spec;
    spec.rows = rows;
    spec.cols = cols;
    spec.condition = condition;
    spec.noise = noise;
    spec.seed = seed;
    auto inst = from_data(sharp::make_synthetic_data(spec), loss, regularization);
    inst.seed = seed;
    *out = wrap(std::move(inst));
  });
}

sharp_status sharp_problem_from_dataset(const char* path, sharp_data_format format,
                                        sharp_loss loss, double regularization,
                                        sharp_problem** out) {
  return guarded([&] {
    require(out && path, "null argument");
    const auto fmt = format == SHARP_FORMAT_LIBSVM ? sharp::DatasetFormat::kLibsvm
                                                   : sharp::DatasetFormat::kCsv;
    *out = wrap(from_data(sharp::load_dataset(path, fmt), loss, regularization));
  });
}

sharp_status sharp_problem_attach_reference(sharp_problem* problem, double tolerance,
                                            int64_t max_iterations) {
  return guarded([&] {
    require(problem, "null problem");
    sharp::attach_reference(problem->instance, tolerance, max_iterations);
    problem->notes = join(problem->instance.notes);
  });
}

void sharp_problem_free(sharp_problem* problem) { delete problem; }

sharp_status sharp_problem_get_info(const sharp_problem* problem, sharp_problem_info* out) {
  return guarded([&] {
    require(problem && out, "null argument");
    const auto& inst = problem->instance;
    *out = sharp_problem_info{};
    out->dimension = inst.dimension();
    if (inst.regularity) {
      const auto& reg = *inst.regularity;
      const auto cond = sharp::derive_conditioning(reg);
      out->has_regularity = 1;
      out->s = reg.s;
      out->L = reg.L;
      out->r = reg.r;
      out->mu = reg.mu;
      out->kappa = cond.kappa;
      out->tau = cond.tau;
      out->q = cond.q;
    }
    out->has_f_star = inst.f_star.has_value();
    out->f_star = inst.f_star.value_or(0.0);
    out->f_star_tolerance = inst.f_star_tolerance.value_or(0.0);
    out->smoothness = inst.smoothness;
    out->initial_value = inst.oracle.value(inst.x0);
    out->has_distance = static_cast<bool>(inst.distance);
  });
}

const char* sharp_problem_name(const sharp_problem* problem) {
  return problem ? problem->instance.name.c_str() : "";
}

const char* sharp_problem_notes(const sharp_problem* problem) {
  return problem ? problem->notes.c_str() : "";
}

sharp_status sharp_problem_default_start(const sharp_problem* problem, double* x, int64_t length) {
  return guarded([&] {
    require(problem && x, "null argument");
    require(length == problem->instance.dimension(), "buffer length must equal the dimension");
    sharp::Vector::Map(x, length) = problem->instance.x0;
  });
}

sharp_status sharp_problem_value(const sharp_problem* problem, const double* x, int64_t length,
                                 double* value) {
  return guarded([&] {
    require(problem && x && value, "null argument");
    require(length == problem->instance.dimension(), "point length must equal the dimension");
    *value = problem->instance.oracle.value(Eigen::Map<const sharp::Vector>(x, length));
  });
}

void sharp_run_options_init(sharp_run_options* options) {
  if (!options) return;
  *options = sharp_run_options{};
  options->method = SHARP_METHOD_ACC;
  options->budget = 1000;
}

sharp_status sharp_run(const sharp_problem* problem, const sharp_run_options* options,
                       sharp_trace** out) {
  return guarded([&] {
    require(out, "null output handle");
    *out = new sharp_trace(wrap_trace(run_method(problem, options)));
  });
}

const char* sharp_bound_name(sharp_method method) {
  switch (method) {
    case SHARP_METHOD_GRAD: return "gradient-descent";
    case SHARP_METHOD_ACC: return "accelerated";
    case SHARP_METHOD_MONO: return "none";
    case SHARP_METHOD_RESTART: return "scheduled-restart";
    case SHARP_METHOD_H_RESTART: return "holder-restart";
    case SHARP_METHOD_CRITERION: return "criterion-restart";
    case SHARP_METHOD_GRID: return "adaptive-grid";
  }
  return "none";
}

sharp_status sharp_bound_at(const sharp_problem* problem, const sharp_run_options* options,
                            double N, double* value) {
  return guarded([&] {
    require(value, "null output");
    const RunSetup s = resolve(problem, options);
    require(N >= 0.0, "N must be nonnegative");
    const auto cond = conditioning(problem);
    const auto& reg = *problem->instance.regularity;
    constexpr double c = sharp::kAcceleratedConstant;
    switch (options->method) {
      case SHARP_METHOD_GRAD:
        if (cond.s != 2.0) throw sharp::Unavailable("gradient descent bound needs s = 2");
        *value = sharp::bound_gradient_descent(cond, gap_at_start(s), N);
        return;
      case SHARP_METHOD_ACC: {
        if (cond.s != 2.0) throw sharp::Unavailable("accelerated bound needs s = 2");
        if (!problem->instance.distance) throw sharp::Unavailable("distance to X* unknown");
        require(N >= 1.0, "N must be at least 1");
        *value = sharp::bound_accelerated(c, reg.L, problem->instance.distance(s.x0), N);
        return;
      }
      case SHARP_METHOD_MONO: throw sharp::Unavailable("the monotone heuristic has no guarantee");
      case SHARP_METHOD_RESTART: {
        if (cond.s != 2.0) throw sharp::Unavailable("scheduled restart bound needs s = 2");
        const double gap0 = gap_at_start(s);
        *value = options->has_C
                     ? sharp::bound_generic(cond, gap0, c, options->C, options->alpha, N).value
                     : sharp::bound_smooth(cond, gap0, c, N);
        return;
      }
      case SHARP_METHOD_H_RESTART:
      case SHARP_METHOD_CRITERION: {
        const double eps0 = options->has_eps0 ? options->eps0 : gap_at_start(s);
        *value = sharp::bound_holder(cond, eps0, sharp::universal_constant(cond.s), N);
        return;
      }
      case SHARP_METHOD_GRID:
        if (cond.s != 2.0) throw sharp::Unavailable("adaptive grid bound needs s = 2");
        *value = sharp::bound_adaptive(cond, gap_at_start(s), c, N);
        return;
    }
    throw sharp::InvalidArgument("unknown method");
  });
}

int64_t sharp_trace_length(const sharp_trace* trace) {
  return trace ? static_cast<int64_t>(trace->trace.entries.size()) : 0;
}

sharp_status sharp_trace_get_entry(const sharp_trace* trace, int64_t index,
                                   sharp_trace_entry* out) {
  return guarded([&] {
    require(trace && out, "null argument");
    require(index >= 0 && index < sharp_trace_length(trace), "entry index out of range");
    const auto& e = trace->trace.entries[static_cast<std::size_t>(index)];
    *out = sharp_trace_entry{};
    out->iteration = e.iteration;
    out->f = e.f_value;
    out->has_gap = e.gap.has_value();
    out->gap = e.gap.value_or(0.0);
    out->restart = e.restart;
    out->has_eps_target = e.epsilon_target.has_value();
    out->eps_target = e.epsilon_target.value_or(0.0);
  });
}

sharp_status sharp_trace_get_summary(const sharp_trace* trace, sharp_trace_summary* out) {
  return guarded([&] {
    require(trace && out, "null argument");
    const sharp::Trace& t = trace->trace;
    *out = sharp_trace_summary{};
    out->iterations = t.iterations();
    out->initial_value = t.initial_value;
    out->final_value = t.final_value();
    const auto gap = t.final_gap();
    out->has_gap = gap.has_value();
    out->final_gap = gap.value_or(0.0);
    out->final_L_hat = t.final_L_hat;
    out->oracle_calls = t.oracle_calls;
    out->backtracks = t.backtracks;
    out->restarts = t.restart_count();
    out->cycles = static_cast<int64_t>(t.cycles.size());
    out->stalled = t.stalled;
    out->truncated = t.truncated;
  });
}

sharp_status sharp_trace_final_point(const sharp_trace* trace, double* x, int64_t length) {
  return guarded([&] {
    require(trace && x, "null argument");
    require(length == trace->trace.final_point.size(), "buffer length must equal the dimension");
    sharp::Vector::Map(x, length) = trace->trace.final_point;
  });
}

const char* sharp_trace_diagnostics(const sharp_trace* trace) {
  return trace ? trace->diagnostics.c_str() : "";
}

sharp_status sharp_trace_write(const sharp_trace* trace, const char* path,
                               sharp_trace_format format, const char* metadata_json) {
  return guarded([&] {
    require(trace && path, "null argument");
    std::string content;
    if (format == SHARP_TRACE_JSON) {
      content = sharp::trace_to_json(trace->trace, metadata_json ? metadata_json : "");
    } else {
      std::ostringstream out;
      sharp::write_trace_csv(out, trace->trace);
      content = out.str();
    }
    sharp::write_file_atomic(path, content);
  });
}

void sharp_trace_free(sharp_trace* trace) { delete trace; }

sharp_status sharp_grid_run(const sharp_problem* problem, const sharp_run_options* options,
                            unsigned threads, sharp_grid** out) {
  return guarded([&] {
    require(out, "null output handle");
    const RunSetup s = resolve(problem, options);
    auto grid = std::make_unique<sharp_grid>();
    grid->outcome =
        sharp::adaptive_grid(problem->instance.oracle, s.x0, options->budget, s.L0, s.solver,
                             threads);
    grid->traces.reserve(grid->outcome.runs.size());
    for (auto& run : grid->outcome.runs) grid->traces.push_back(wrap_trace(std::move(run.trace)));
    *out = grid.release();
  });
}

int64_t sharp_grid_size(const sharp_grid* grid) {
  return grid ? static_cast<int64_t>(grid->outcome.runs.size()) : 0;
}

int64_t sharp_grid_best(const sharp_grid* grid) {
  return grid ? static_cast<int64_t>(grid->outcome.best) : -1;
}

int64_t sharp_grid_total_iterations(const sharp_grid* grid) {
  return grid ? grid->outcome.total_inner_iterations : 0;
}

sharp_status sharp_grid_get_run(const sharp_grid* grid, int64_t index, sharp_grid_run_info* out) {
  return guarded([&] {
    require(grid && out, "null argument");
    require(index >= 0 && index < sharp_grid_size(grid), "run index out of range");
    const auto& run = grid->outcome.runs[static_cast<std::size_t>(index)];
    *out = sharp_grid_run_info{};
    out->i = run.i;
    out->j = run.j;
    out->C = run.schedule.C;
    out->alpha = run.schedule.kind == sharp::Schedule::Kind::kConstant ? 0.0 : run.schedule.alpha;
    out->inner_iterations = run.inner_iterations;
    out->capped = run.capped;
    out->failed = run.failed;
    out->final_value = grid->traces[static_cast<std::size_t>(index)].trace.final_value();
  });
}

const sharp_trace* sharp_grid_trace(const sharp_grid* grid, int64_t index) {
  if (!grid || index < 0 || index >= sharp_grid_size(grid)) return nullptr;
  return &grid->traces[static_cast<std::size_t>(index)];
}

void sharp_grid_free(sharp_grid* grid) { delete grid; }

}  // extern "C"
