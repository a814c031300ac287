#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "experiment.hpp"

int main(int argc, char** argv) {
  using sharp::cli::ExperimentConfig;
  ExperimentConfig cfg;
  CLI::App app{"Restart schemes for sharp convex problems: run, compare and grid-search solvers"};
  app.set_config("--config", "", "key=value configuration file; flags override its values");
  app.require_subcommand(1);

  app.add_option("--problem", cfg.problem, "quadratic | norm-power | abs | synthetic | dataset");
  app.add_option("--dataset", cfg.dataset, "CSV or LibSVM data file");
  app.add_option("--dataset-format", cfg.dataset_format, "auto | csv | libsvm");
  app.add_option("--loss", cfg.loss, "ls | logistic | lasso | svm");
  app.add_option("--method", cfg.method, "grad | acc | mono | restart | h-restart | criterion | grid");
  app.add_option("--methods", cfg.methods, "methods for compare")->delimiter(',');
  app.add_option("--N", cfg.N, "budget of accepted inner iterations");
  app.add_option("--L0", cfg.L0, "initial Lipschitz estimate (default: problem constant)");
  app.add_option("--seed", cfg.seed, "random seed of synthetic problems");
  app.add_option("--gamma", cfg.gamma, "decay rate of the target accuracies");
  app.add_option("--C", cfg.C, "schedule constant (default: optimal schedule)");
  app.add_option("--alpha", cfg.alpha, "schedule growth rate, used with --C");
  app.add_option("--eps0", cfg.eps0, "initial target accuracy of h-restart");
  app.add_option("--f-star", cfg.f_star, "optimal value, overrides the problem's");
  app.add_option("--out", cfg.out, "trace file (run) or output directory (compare, grid)");
  app.add_option("--format", cfg.format, "csv | json");
  app.add_option("--n", cfg.n, "dimension of synthetic problems");
  app.add_option("--kappa", cfg.kappa, "condition number of the quadratic");
  app.add_option("--r", cfg.r, "exponent of norm-power");
  app.add_option("--radius", cfg.radius, "radius of the starting sphere");
  app.add_option("--weight", cfg.weight, "weight of the abs problem");
  app.add_option("--lambda", cfg.lambda, "LASSO / dual SVM regularization");
  app.add_option("--rows", cfg.rows, "rows of the synthetic design");
  app.add_option("--cols", cfg.cols, "columns of the synthetic design");
  app.add_option("--condition", cfg.condition, "conditioning of the synthetic design");
  app.add_option("--noise", cfg.noise, "noise level of the synthetic targets");
  app.add_option("--reference-iters", cfg.reference_iterations,
                 "iteration cap of the reference solve giving f* (0 disables)");
  app.add_option("--threads", cfg.threads, "grid workers, 0 = all cores");

  auto* run = app.add_subcommand("run", "run one method and write its trace")->fallthrough();
  auto* compare = app.add_subcommand("compare", "run several methods at equal budget")->fallthrough();
  auto* grid = app.add_subcommand("grid", "logarithmic grid search over restart schedules")->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return sharp::cli::run_command(cfg, std::cout);
    if (compare->parsed()) return sharp::cli::compare_command(cfg, std::cout);
    if (grid->parsed()) return sharp::cli::grid_command(cfg, std::cout);
  } catch (const sharp::cli::CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
