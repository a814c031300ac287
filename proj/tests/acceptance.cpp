// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "experiment.hpp"
#include "sharp/bounds.hpp"
#include "sharp/problems.hpp"
#include "sharp/restarts.hpp"
#include "sharp/solvers.hpp"

using namespace sharp;

namespace {

constexpr double kRel = 1e-9;

bool within(double value, double bound) { return value <= bound + kRel * std::abs(bound); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double final_gap(const Trace& t) { return *t.final_gap(); }

// 1. tau = 0: per-cycle contraction e^{-2k} and the smooth envelope.
Outcome criterion_1() {
  Outcome o;
  const ProblemInstance p = make_quadratic(50, 100.0, 1);
  const auto cond = derive_conditioning(*p.regularity);
  const double gap0 = *p.regularity->gap0;
  const Schedule sched = optimal_schedule_smooth(cond, gap0, kAcceleratedConstant);
  const std::int64_t cycles = 12;
  const std::int64_t N = cycles * sched.length(1);
  RestartOptions opts;
  opts.f_star = 0.0;
  const Trace t = restart_scheduled(p.oracle, p.x0, sched, N, p.smoothness, opts);
  if (static_cast<std::int64_t>(t.cycles.size()) != cycles) o.fail("unexpected cycle count");
  for (const CycleRecord& c : t.cycles) {
    const double bound = std::exp(-2.0 * c.index) * gap0;
    if (!within(c.f_value, bound))
      o.fail("cycle " + std::to_string(c.index) + ": gap " + fmt(c.f_value) + " > " + fmt(bound));
  }
  const double env = bound_smooth(cond, gap0, kAcceleratedConstant, static_cast<double>(N));
  if (!within(final_gap(t), env)) o.fail("final gap above envelope " + fmt(env));
  o.detail += (o.detail.empty() ? "" : "; ") + std::string("C=") + fmt(sched.C) + " cycles=" +
              std::to_string(t.cycles.size()) + " final_gap=" + fmt(final_gap(t)) +
              " envelope=" + fmt(env);
  return o;
}

// 2. tau > 0 on |x|^4.
Outcome criterion_2() {
  Outcome o;
  const ProblemInstance p = make_norm_power(10, 4.0, 1.0, 2);
  const auto cond = derive_conditioning(*p.regularity);
  const double gap0 = *p.regularity->gap0;
  const Schedule sched = optimal_schedule_smooth(cond, gap0, kAcceleratedConstant);
  RestartOptions opts;
  opts.f_star = 0.0;
  double restarted_2000 = 0.0;
  std::ostringstream info;
  for (std::int64_t N : {100, 500, 2000}) {
    const Trace t = restart_scheduled(p.oracle, p.x0, sched, N, p.smoothness, opts);
    const double env = bound_smooth(cond, gap0, kAcceleratedConstant, static_cast<double>(N));
    if (!within(final_gap(t), env))
      o.fail("N=" + std::to_string(N) + ": gap " + fmt(final_gap(t)) + " > " + fmt(env));
    info << " N=" << N << ":" << fmt(final_gap(t)) << "<=" << fmt(env);
    if (N == 2000) restarted_2000 = final_gap(t);
  }
  const Trace plain = accelerated(p.oracle, p.x0, p.smoothness, 2000, {0.0});
  const double agm = final_gap(plain);
  if (agm == 0.0 && restarted_2000 == 0.0)
    o.fail("no separation: plain AGM and the restarted run both reach f = 0 exactly by N=2000");
  else if (!(agm >= 10.0 * restarted_2000))
    o.fail("plain AGM only " + fmt(agm / restarted_2000) + "x worse");
  info << " agm(2000)=" << fmt(agm);
  o.detail += info.str();
  return o;
}

// 3. adaptive grid on |x|^4, N = 1000.
Outcome criterion_3() {
  Outcome o;
  const ProblemInstance p = make_norm_power(10, 4.0, 1.0, 2);
  const auto cond = derive_conditioning(*p.regularity);
  const double gap0 = *p.regularity->gap0;
  const std::int64_t N = 1000;
  const GridOutcome g = adaptive_grid(p.oracle, p.x0, N, p.smoothness, {0.0});
  const double env = bound_adaptive(cond, gap0, kAcceleratedConstant, static_cast<double>(N));
  const double best = final_gap(g.best_run().trace);
  if (!within(best, env)) o.fail("best gap " + fmt(best) + " > " + fmt(env));
  const std::int64_t budget = grid_i_max(N) * (grid_j_max(N) + 1) * 2 * N;
  if (g.total_inner_iterations > budget) o.fail("total work above the grid budget");
  for (const GridRun& r : g.runs)
    if (r.failed || r.inner_iterations < N || r.inner_iterations > 2 * N)
      o.fail("run (" + std::to_string(r.i) + "," + std::to_string(r.j) + ") has N'=" +
             std::to_string(r.inner_iterations));
  o.detail += "best=(" + std::to_string(g.best_run().i) + "," + std::to_string(g.best_run().j) +
              ") gap=" + fmt(best) + " envelope=" + fmt(env) +
              " work=" + std::to_string(g.total_inner_iterations) + "/" + std::to_string(budget);
  return o;
}

// 4. criterion restart versus the scheduled thresholds.
Outcome criterion_4() {
  Outcome o;
  std::ostringstream info;
  struct Case {
    ProblemInstance p;
    std::int64_t N;
  };
  std::vector<Case> cases;
  cases.push_back({make_quadratic(50, 100.0, 1), 1000});
  cases.push_back({make_norm_power(10, 4.0, 1.0, 2), 2000});
  for (const Case& c : cases) {
    const auto cond = derive_conditioning(*c.p.regularity);
    const double c_u = universal_constant(cond.s);
    const double eps0 = c.p.oracle.value(c.p.x0);
    const Trace t = criterion_restart(c.p.oracle, c.p.x0, 0.0, cond.q, c.N, c.p.smoothness);
    double thresholds = 0.0;
    for (const CycleRecord& cyc : t.cycles) {
      thresholds += std::ceil(schedule_threshold_holder(cond, eps0, c_u, cond.q, cyc.index));
      if (cyc.completed && static_cast<double>(cyc.end_iteration) > thresholds)
        o.fail(c.p.name + " cycle " + std::to_string(cyc.index) + ": " +
               std::to_string(cyc.end_iteration) + " > " + fmt(thresholds));
    }
    const double N = static_cast<double>(t.iterations());
    const double env = bound_holder(cond, eps0, c_u, N);
    if (!within(final_gap(t), env))
      o.fail(c.p.name + ": final gap " + fmt(final_gap(t)) + " > " + fmt(env));
    info << ' ' << c.p.name << ": cycles=" << t.cycles.size() << " N=" << t.iterations()
         << " gap=" << fmt(final_gap(t)) << "<=" << fmt(env);
  }
  o.detail += info.str();
  return o;
}

// 5. inner-solver guarantees.
Outcome criterion_5() {
  Outcome o;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> dim(2, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t checked = 0;
  for (int k = 0; k < 20; ++k) {
    const double kappa = std::pow(10.0, 4.0 * unit(rng));
    const ProblemInstance p = make_quadratic(dim(rng), kappa, 100 + k);
    const double L = p.regularity->L;
    // L0 log-uniform in [1e-3 L, 2 L]
    const double L0 = L * std::exp(std::log(1e-3) + unit(rng) * std::log(2000.0));
    const double d0 = p.distance(p.x0);
    const Trace t = accelerated(p.oracle, p.x0, L0, 400, {0.0});
    for (const TraceEntry& e : t.entries) {
      ++checked;
      const double b = bound_accelerated(kAcceleratedConstant, L, d0, static_cast<double>(e.iteration));
      if (!within(*e.gap, b))
        o.fail("AGM quadratic " + std::to_string(k) + " t=" + std::to_string(e.iteration));
    }
  }
  for (Index n : {Index{1}, Index{8}}) {
    const ProblemInstance p = make_abs(n, 1.0, 1.0, 7);
    const double c = universal_constant(1.0);
    const double L = p.regularity->L;
    const double d0 = p.distance(p.x0);
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const Trace t = universal_fast_gradient(p.oracle, p.x0, eps, L, 2000, {}, {0.0});
      for (const TraceEntry& e : t.entries) {
        ++checked;
        const double b = bound_universal(c, 1.0, L, d0, eps, static_cast<double>(e.iteration));
        if (!within(*e.gap, b))
          o.fail("UFGM abs n=" + std::to_string(n) + " eps=" + fmt(eps) +
                 " t=" + std::to_string(e.iteration));
      }
      if (t.stalled) o.fail("UFGM line search stalled");
    }
  }
  o.detail += std::to_string(checked) + " pointwise checks";
  return o;
}

// 6. schedule algebra properties.
Outcome criterion_6() {
  Outcome o;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_inversion = 0.0, worst_continuity = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double C = std::pow(10.0, -1.0 + 4.0 * unit(rng));
    const double alpha = k % 10 == 0 ? 0.0 : 2.0 * unit(rng);
    const double R = 0.1 + 40.0 * unit(rng);
    const double N = schedule_total(C, alpha, R);
    const double back = restart_count(C, alpha, N);
    worst_inversion = std::max(worst_inversion, std::abs(back - R) / R);
    if (std::abs(back - R) > 1e-12 * R) o.fail("inversion off at C=" + fmt(C) + " alpha=" + fmt(alpha));

    const double nu = std::pow(10.0, -3.0 + 6.0 * unit(rng));
    const double gamma = 0.1 + 3.0 * unit(rng);
    const double M = 1.0 + 5000.0 * unit(rng);
    if (bound_rounded(nu, gamma, C, alpha, M) < bound_schedule(nu, gamma, C, alpha, M))
      o.fail("rounded bound below real bound");

    // tau -> 0 continuity on exponents of moderate size
    const double kappa = std::pow(10.0, 3.0 * unit(rng));
    const double gap0 = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double x = 10.0 * unit(rng);  // target value of the decay exponent
    DerivedConditioning c0{kappa, 0.0, 2.0, 2.0};
    DerivedConditioning c1{kappa, 1e-6, 2.0, 2.0};
    const double scale = std::exp(1.0) * std::sqrt(4.0 * kappa);
    const double n_smooth = x * scale / 2.0;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    const double checks[] = {
        rel(bound_smooth(c1, gap0, 4.0, n_smooth), bound_smooth(c0, gap0, 4.0, n_smooth)),
        rel(bound_holder(c1, gap0, 4.0, n_smooth), bound_holder(c0, gap0, 4.0, n_smooth)),
        rel(bound_gradient_descent(c1, gap0, x * std::exp(1.0) * kappa),
            bound_gradient_descent(c0, gap0, x * std::exp(1.0) * kappa)),
        rel(bound_generic(c1, gap0, 4.0, constant_for_rate(c1, gap0, 4.0, 1e-6), 1e-6, n_smooth).value,
            bound_generic(c0, gap0, 4.0, optimal_constant_smooth(c0, gap0, 4.0), 0.0, n_smooth).value)};
    for (double r : checks) {
      worst_continuity = std::max(worst_continuity, r);
      if (!(r <= 1e-4)) o.fail("continuity gap " + fmt(r));
    }
  }
  o.detail += "worst inversion " + fmt(worst_inversion) + ", worst continuity " + fmt(worst_continuity);
  return o;
}

// 7. qualitative ordering on the sonar-shaped least-squares instance.
Outcome criterion_7() {
  Outcome o;
  cli::ExperimentConfig cfg;
  cfg.problem = "synthetic";
  cfg.loss = "ls";
  cfg.rows = 208;
  cfg.cols = 60;
  cfg.condition = 1e5;
  cfg.N = 3000;
  cfg.methods = {"grad", "acc", "mono", "grid"};
  std::vector<cli::MethodResult> results;
  std::ostringstream sink;
  if (cli::compare_command(cfg, sink, &results) != 0) {
    o.fail("compare failed: " + sink.str());
    return o;
  }
  auto gap = [&](const std::string& m) {
    for (const auto& r : results)
      if (r.method == m) return r.summary.final_gap;
    return std::nan("");
  };
  auto markers = [&](const std::string& m) {
    for (const auto& r : results)
      if (r.method == m) return r.restart_iterations.size();
    return std::size_t{0};
  };
  const double g_grid = gap("grid"), g_mono = gap("mono"), g_acc = gap("acc");
  if (!(g_grid <= g_mono)) o.fail("grid above mono");
  if (!(g_mono <= g_acc)) o.fail("mono above acc");
  if (markers("grid") == 0 || markers("mono") == 0) o.fail("restart markers missing");
  o.detail += "grad=" + fmt(gap("grad")) + " acc=" + fmt(g_acc) + " mono=" + fmt(g_mono) +
              " grid=" + fmt(g_grid) + " markers(mono,grid)=" + std::to_string(markers("mono")) +
              "," + std::to_string(markers("grid"));
  return o;
}

// 8. sampled regularity and finite-difference gradients.
Outcome criterion_8() {
  Outcome o;
  std::vector<ProblemInstance> instances;
  instances.push_back(make_quadratic(1, 1.0, 3));
  instances.push_back(make_quadratic(50, 100.0, 1));
  instances.push_back(make_quadratic(20, 1e4, 4));
  instances.push_back(make_norm_power(10, 4.0, 1.0, 2));
  instances.push_back(make_norm_power(5, 2.0, 3.0, 2));
  instances.push_back(make_norm_power(5, 3.0, 2.0, 2));
  instances.push_back(make_abs(1, 1.0));
  instances.push_back(make_abs(8, 2.0));
  SyntheticSpec spec;
  instances.push_back(make_least_squares(make_synthetic_data(spec)));
  instances.push_back(make_logistic(make_synthetic_data(spec)));
  instances.push_back(make_lasso(make_synthetic_data(spec)));
  instances.push_back(make_dual_svm(make_synthetic_data({40, 10, 100.0, 0.1, 9})));
  double worst_fd = 0.0;
  int regular = 0;
  for (std::size_t k = 0; k < instances.size(); ++k) {
    const ProblemInstance& p = instances[k];
    const auto pts = sample_points(p, 100, 800 + k);
    if (p.regularity) {
      ++regular;
      if (!check_sharpness_bound(p.oracle, *p.regularity, pts, p.distance))
        o.fail(p.name + " sharpness check");
      if (!check_smoothness_upper_bound(p.oracle, *p.regularity, pts, p.distance))
        o.fail(p.name + " smoothness upper bound");
    }
    for (const Vector& x : pts) {
      const Vector probe = p.name == "dual-svm" ? Vector(x.cwiseMax(0.1).cwiseMin(0.9)) : x;
      const double err = gradient_check_error(p.oracle, probe);
      worst_fd = std::max(worst_fd, err);
      if (!(err <= 1e-5)) o.fail(p.name + " finite differences " + fmt(err));
    }
  }
  o.detail += std::to_string(instances.size()) + " instances (" + std::to_string(regular) +
              " with regularity), worst FD error " + fmt(worst_fd);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double limit_seconds;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 bound dominance tau=0", 5, criterion_1},
      {"2 bound dominance tau>0", 10, criterion_2},
      {"3 adaptive grid", 60, criterion_3},
      {"4 criterion restart dominance", 10, criterion_4},
      {"5 inner-solver guarantees", 30, criterion_5},
      {"6 schedule algebra", 5, criterion_6},
      {"7 qualitative ordering", 60, criterion_7},
      {"8 regularity validation", 5, criterion_8},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_seconds) o.fail("took " + fmt(secs) + " s");
    failures += o.pass ? 0 : 1;
    std::printf("%s  [%s] (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
