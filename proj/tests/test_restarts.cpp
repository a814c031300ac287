#include <doctest.h>

#include <cmath>
#include <set>

#include "sharp/bounds.hpp"
#include "sharp/error.hpp"
#include "sharp/problems.hpp"
#include "sharp/restarts.hpp"

using sharp::ProximalOracle;
using sharp::Schedule;
using sharp::Trace;
using sharp::Vector;

namespace {

ProximalOracle half_square(int n) {
  return ProximalOracle(n, [](const Vector& x, Vector* g) {
    if (g) *g = x;
    return 0.5 * x.squaredNorm();
  });
}

sharp::RestartOptions with_f_star(double f_star) {
  sharp::RestartOptions o;
  o.f_star = f_star;
  return o;
}

double gap0_of(const sharp::ProblemInstance& p) { return p.oracle.value(p.x0) - *p.f_star; }

}  // namespace

TEST_CASE("schedule lengths") {
  auto c = Schedule::constant(2.5);
  for (int k = 1; k < 5; ++k) CHECK(c.length(k) == 3);
  auto g = Schedule::geometric(1.0, std::log(2.0));
  CHECK(g.length(1) == 2);
  CHECK(g.length(3) == 8);
  CHECK(Schedule::constant(0.01).length(1) == 1);
  auto huge = Schedule::geometric(1.0, 5.0);
  CHECK(huge.length(100) > 0);
  CHECK_THROWS_AS(Schedule::constant(0.0).validate(), sharp::InvalidArgument);
  CHECK_THROWS_AS(Schedule::geometric(1.0, -1.0).validate(), sharp::InvalidArgument);
}

TEST_CASE("a single cycle of length N is the accelerated method") {
  auto p = sharp::make_quadratic(10, 100, 3);
  const std::int64_t N = 150;
  auto plain = sharp::accelerated(p.oracle, p.x0, p.smoothness, N);
  auto restarted = sharp::restart_scheduled(p.oracle, p.x0, Schedule::constant(double(N)), N, p.smoothness);
  REQUIRE(restarted.entries.size() == plain.entries.size());
  for (std::size_t k = 0; k < plain.entries.size(); ++k)
    CHECK(restarted.entries[k].f_value == plain.entries[k].f_value);
  CHECK(restarted.final_point == plain.final_point);
  CHECK(restarted.cycles.size() == 1);
}

TEST_CASE("optimal schedule, strongly convex quadratic: e^{-2k} decrease") {
  auto p = sharp::make_quadratic(20, 100, 8);
  const auto cond = sharp::derive_conditioning(*p.regularity);
  const double g0 = gap0_of(p);
  auto sched = sharp::optimal_schedule_smooth(cond, g0, sharp::kAcceleratedConstant);
  auto t = sharp::restart_scheduled(p.oracle, p.x0, sched, 2000, p.smoothness, with_f_star(0.0));
  REQUIRE(t.cycles.size() >= 5);
  for (const auto& c : t.cycles) {
    if (!c.completed) continue;
    const double target = std::exp(-2.0 * c.index) * g0;
    if (target < 1e-13 * g0) break;  // below the rounding floor of f
    CAPTURE(c.index);
    CHECK(c.f_value <= target);
  }
  CHECK(*t.final_gap() <= sharp::bound_smooth(cond, g0, 4, 2000));
}

TEST_CASE("optimal schedule, |x|^4: final gap within the envelope") {
  auto p = sharp::make_norm_power(5, 4, 1, 2);
  const auto cond = sharp::derive_conditioning(*p.regularity);
  CHECK(cond.tau == doctest::Approx(0.5));
  const double g0 = gap0_of(p);
  auto sched = sharp::optimal_schedule_smooth(cond, g0, 4);
  for (std::int64_t N : {200, 1000, 2000}) {
    auto t = sharp::restart_scheduled(p.oracle, p.x0, sched, N, p.smoothness, with_f_star(0.0));
    CHECK(t.iterations() == N);
    CHECK(*t.final_gap() <= sharp::bound_smooth(cond, g0, 4, double(N)));
  }
}

TEST_CASE("restart markers and cycle bookkeeping") {
  auto p = sharp::make_quadratic(6, 30, 1);
  auto t = sharp::restart_scheduled(p.oracle, p.x0, Schedule::constant(7), 40, p.smoothness);
  CHECK(t.iterations() == 40);
  std::int64_t total = 0;
  for (const auto& c : t.cycles) {
    total += c.iterations;
    CHECK(c.end_iteration == total);
    if (c.completed) CHECK(t.entries[c.end_iteration - 1].restart);
  }
  CHECK(total == 40);
  CHECK(t.cycles.size() == 6);  // 5 full cycles of 7, the sixth cut at 40
  CHECK(t.truncated);
  CHECK(t.restart_count() == 6);  // the cut final cycle ends on a marker too
}

TEST_CASE("H-RESTART") {
  SUBCASE("s = 2 follows the same envelope as RESTART") {
    auto p = sharp::make_quadratic(10, 50, 4);
    const auto cond = sharp::derive_conditioning(*p.regularity);
    const double g0 = gap0_of(p);
    const double c = sharp::universal_constant(2);
    auto hs = sharp::optimal_schedule_holder(cond, g0, c);
    auto h = sharp::h_restart(p.oracle, p.x0, g0, hs.gamma, hs.schedule, 600, p.smoothness, with_f_star(0.0));
    auto r = sharp::restart_scheduled(p.oracle, p.x0, sharp::optimal_schedule_smooth(cond, g0, c), 600,
                                      p.smoothness, with_f_star(0.0));
    CHECK(*h.final_gap() <= sharp::bound_holder(cond, g0, c, 600));
    CHECK(*r.final_gap() <= sharp::bound_smooth(cond, g0, c, 600));
    for (const auto& e : h.entries) CHECK(e.epsilon_target.has_value());
  }
  SUBCASE("|x| with constant optimal schedule") {
    auto p = sharp::make_abs(1, 1, 1);
    const auto cond = sharp::derive_conditioning(*p.regularity);
    CHECK(cond.tau == 0.0);
    CHECK(cond.q == 0.5);
    const double g0 = gap0_of(p);
    const double c = sharp::universal_constant(1);
    auto hs = sharp::optimal_schedule_holder(cond, g0, c);
    CHECK(hs.schedule.alpha == 0.0);
    CHECK(hs.gamma == 0.5);
    for (std::int64_t N : {200, 2000}) {
      auto t = sharp::h_restart(p.oracle, p.x0, g0, hs.gamma, hs.schedule, N, p.smoothness, with_f_star(0.0));
      CHECK(*t.final_gap() <= sharp::bound_holder(cond, g0, c, double(N)));
    }
  }
  SUBCASE("gamma = 0 keeps the target fixed") {
    auto p = sharp::make_abs(3, 1, 1, 5);
    const double g0 = gap0_of(p);
    auto t = sharp::h_restart(p.oracle, p.x0, g0, 0.0, Schedule::constant(20), 200, p.smoothness);
    for (const auto& e : t.entries) CHECK(*e.epsilon_target == g0);
  }
}

TEST_CASE("criterion restart") {
  SUBCASE("x^2/2, gamma = 1: e^{-k} decrease per cycle") {
    auto f = half_square(3);
    Vector x0(3);
    x0 << 1, -1, 2;
    const double g0 = f.value(x0);
    auto t = sharp::criterion_restart(f, x0, 0.0, 1.0, 200, 1.0);
    for (const auto& c : t.cycles)
      if (c.completed) CHECK(c.f_value <= std::exp(-double(c.index)) * g0);
    for (const auto& e : t.entries) CHECK(e.gap.has_value());
  }
  SUBCASE("an optimal start returns at once") {
    auto t = sharp::criterion_restart(half_square(2), Vector::Zero(2), 0.0, 1.0, 100, 1.0);
    CHECK(t.cycles.empty());
    CHECK(t.entries.empty());
    CHECK(t.final_point == Vector::Zero(2));
  }
  SUBCASE("|x|^4, gamma = 2: cycles no longer than the scheduled lengths") {
    // Each criterion cycle stops no later than the length t_k that the
    // Holder schedule needs to certify eps_k = e^{-2k} eps0.
    auto p = sharp::make_norm_power(5, 4, 1, 2);
    const auto cond = sharp::derive_conditioning(*p.regularity);
    const double g0 = gap0_of(p);
    const double c = sharp::universal_constant(2);
    auto crit = sharp::criterion_restart(p.oracle, p.x0, 0.0, 2.0, 2000, p.smoothness);
    REQUIRE(crit.cycles.size() >= 5);
    double scheduled = 0;
    for (const auto& cy : crit.cycles) {
      if (!cy.completed) break;
      const double tk = std::ceil(sharp::schedule_threshold_holder(cond, g0, c, 2.0, cy.index));
      scheduled += tk;
      CAPTURE(cy.index);
      CHECK(double(cy.iterations) <= tk);
      CHECK(double(cy.end_iteration) <= scheduled);
    }
  }
  SUBCASE("an optimum that is too high is diagnosed") {
    auto t = sharp::criterion_restart(half_square(1), Vector::Ones(1), 1.0, 1.0, 10, 1.0);
    CHECK_FALSE(t.diagnostics.empty());
  }
}

TEST_CASE("monotone restart") {
  SUBCASE("no increase: same as the accelerated method") {
    auto f = half_square(4);
    Vector x0 = Vector::Ones(4);
    auto plain = sharp::accelerated(f, x0, 4.0, 30);
    bool monotone = true;
    double prev = plain.initial_value;
    for (const auto& e : plain.entries) {
      monotone = monotone && e.f_value <= prev;
      prev = e.f_value;
    }
    REQUIRE(monotone);
    auto mono = sharp::monotone_restart(f, x0, 30, 4.0);
    REQUIRE(mono.entries.size() == plain.entries.size());
    for (std::size_t k = 0; k < plain.entries.size(); ++k) CHECK(mono.entries[k].f_value == plain.entries[k].f_value);
    CHECK(mono.restart_count() == 0);
  }
  SUBCASE("kappa = 1e3: restarts fire and beat plain AGM") {
    auto p = sharp::make_quadratic(20, 1e3, 6);
    sharp::SolverOptions opts;
    opts.f_star = 0.0;
    auto plain = sharp::accelerated(p.oracle, p.x0, p.smoothness, 1000, opts);
    auto mono = sharp::monotone_restart(p.oracle, p.x0, 1000, p.smoothness, opts);
    CHECK(mono.restart_count() >= 2);
    CHECK(*mono.final_gap() < *plain.final_gap());
    for (const auto& c : mono.cycles)
      if (c.completed) CHECK(mono.entries[c.end_iteration - 1].restart);
  }
  SUBCASE("N = 1") {
    auto p = sharp::make_quadratic(5, 10, 2);
    auto t = sharp::monotone_restart(p.oracle, p.x0, 1, p.smoothness);
    CHECK(t.entries.size() == 1);
    CHECK(t.restart_count() == 0);
  }
}

TEST_CASE("grid ranges") {
  CHECK(sharp::grid_i_max(64) == 6);
  CHECK(sharp::grid_j_max(64) == 6);
  CHECK(sharp::grid_i_max(100) == 6);
  CHECK(sharp::grid_j_max(100) == 7);
}

TEST_CASE("adaptive grid") {
  SUBCASE("N = 64 gives 42 runs") {
    auto p = sharp::make_quadratic(10, 100, 0);
    auto g = sharp::adaptive_grid(p.oracle, p.x0, 64, p.smoothness, {}, 2);
    CHECK(g.runs.size() == 42);
    std::set<std::pair<int, int>> cells;
    for (const auto& r : g.runs) {
      CHECK(r.i >= 1);
      CHECK(r.i <= 6);
      CHECK(r.j >= 0);
      CHECK(r.j <= 6);
      CHECK(r.inner_iterations >= 64);
      CHECK(r.inner_iterations <= 128);
      cells.insert({r.i, r.j});
    }
    CHECK(cells.size() == 42);
    std::int64_t total = 0;
    for (const auto& r : g.runs) total += r.inner_iterations;
    CHECK(total == g.total_inner_iterations);
    const auto& best = g.best_run();
    for (const auto& r : g.runs) CHECK(best.trace.final_value() <= r.trace.final_value());
  }
  SUBCASE("strongly convex quadratic: tau = 0 guarantee") {
    auto p = sharp::make_quadratic(10, 100, 9);
    const auto cond = sharp::derive_conditioning(*p.regularity);
    const double g0 = gap0_of(p);
    const double Cs = sharp::optimal_constant_smooth(cond, g0, 4);
    const std::int64_t N = 400;
    REQUIRE(double(N) >= 2 * Cs);
    sharp::SolverOptions opts;
    opts.f_star = 0.0;
    auto g = sharp::adaptive_grid(p.oracle, p.x0, N, p.smoothness, opts);
    CHECK(*g.best_run().trace.final_gap() <= g0 * std::exp(-std::exp(-1.0) / std::sqrt(4 * cond.kappa) * N));
  }
  SUBCASE("|x|^4, N = 1000: tau > 0 guarantee") {
    auto p = sharp::make_norm_power(5, 4, 1, 2);
    const auto cond = sharp::derive_conditioning(*p.regularity);
    const double g0 = gap0_of(p);
    sharp::SolverOptions opts;
    opts.f_star = 0.0;
    auto g = sharp::adaptive_grid(p.oracle, p.x0, 1000, p.smoothness, opts);
    CHECK(*g.best_run().trace.final_gap() <= sharp::bound_adaptive(cond, g0, 4, 1000));
  }
  SUBCASE("result does not depend on the thread count") {
    auto p = sharp::make_quadratic(8, 300, 12);
    auto a = sharp::adaptive_grid(p.oracle, p.x0, 128, p.smoothness, {}, 1);
    auto b = sharp::adaptive_grid(p.oracle, p.x0, 128, p.smoothness, {}, 4);
    REQUIRE(a.runs.size() == b.runs.size());
    CHECK(a.best == b.best);
    CHECK(a.total_inner_iterations == b.total_inner_iterations);
    for (std::size_t k = 0; k < a.runs.size(); ++k) {
      CHECK(a.runs[k].i == b.runs[k].i);
      CHECK(a.runs[k].j == b.runs[k].j);
      CHECK(a.runs[k].trace.final_value() == b.runs[k].trace.final_value());
    }
  }
  SUBCASE("too small a budget") {
    auto p = sharp::make_quadratic(2, 2, 0);
    CHECK_THROWS_AS(sharp::adaptive_grid(p.oracle, p.x0, 3, 1.0), sharp::InvalidArgument);
  }
}
