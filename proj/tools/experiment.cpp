#include "experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sharp::cli {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, sharp_method>& method_table() {
  static const std::map<std::string, sharp_method> table{
      {"grad", SHARP_METHOD_GRAD},         {"acc", SHARP_METHOD_ACC},
      {"mono", SHARP_METHOD_MONO},         {"restart", SHARP_METHOD_RESTART},
      {"h-restart", SHARP_METHOD_H_RESTART}, {"criterion", SHARP_METHOD_CRITERION},
      {"grid", SHARP_METHOD_GRID}};
  return table;
}

sharp_method parse_method(const std::string& name) {
  const auto it = method_table().find(name);
  if (it == method_table().end()) throw CliError("unknown method '" + name + "'", 2);
  return it->second;
}

sharp_loss parse_loss(const std::string& name) {
  if (name == "ls" || name == "least-squares") return SHARP_LOSS_LEAST_SQUARES;
  if (name == "logistic") return SHARP_LOSS_LOGISTIC;
  if (name == "lasso") return SHARP_LOSS_LASSO;
  if (name == "svm" || name == "dual-svm") return SHARP_LOSS_DUAL_SVM;
  throw CliError("unknown loss '" + name + "'", 2);
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string optional_number(bool has, double v) { return has ? number(v) : std::string(); }

void check(sharp_status status, const std::string& context) {
  if (status != SHARP_OK) throw CliError(context + ": " + sharp_last_error());
}

sharp_run_options run_options(const ExperimentConfig& config, sharp_method method) {
  sharp_run_options o;
  sharp_run_options_init(&o);
  o.method = method;
  o.budget = config.N;
  if (config.L0) {
    o.has_L0 = 1;
    o.L0 = *config.L0;
  }
  if (config.gamma) {
    o.has_gamma = 1;
    o.gamma = *config.gamma;
  }
  if (config.C) {
    o.has_C = 1;
    o.C = *config.C;
    o.alpha = config.alpha;
  }
  if (config.eps0) {
    o.has_eps0 = 1;
    o.eps0 = *config.eps0;
  }
  if (config.f_star) {
    o.has_f_star = 1;
    o.f_star = *config.f_star;
  }
  return o;
}

void write_text(const fs::path& path, const std::string& text) {
  const fs::path tmp = fs::path(path) += ".tmp";
  {
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw CliError("cannot write '" + tmp.string() + "'");
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw CliError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError("cannot move '" + tmp.string() + "' into place");
}

fs::path prepare_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

sharp_trace_format trace_format(const ExperimentConfig& config) {
  return config.format == "json" ? SHARP_TRACE_JSON : SHARP_TRACE_CSV;
}

void print_summary(std::ostream& out, const MethodResult& r) {
  if (!r.ok) {
    out << r.method << ": FAILED: " << r.error << '\n';
    return;
  }
  out << r.method << ": iterations=" << r.summary.iterations
      << " final_f=" << number(r.summary.final_value);
  if (r.summary.has_gap) out << " final_gap=" << number(r.summary.final_gap);
  if (r.bound) out << " bound[" << r.bound_name << "]=" << number(*r.bound);
  out << " restarts=" << r.summary.restarts << " oracle_calls=" << r.summary.oracle_calls
      << " backtracks=" << r.summary.backtracks << " final_L_hat=" << number(r.summary.final_L_hat)
      << '\n';
  if (r.summary.stalled) out << "  warning: line search stalled\n";
  if (!r.trace_path.empty()) out << "  trace: " << r.trace_path << '\n';
}

}  // namespace

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& m) { throw CliError(m, 2); };
  static const char* problems[] = {"quadratic", "norm-power", "abs", "synthetic", "dataset"};
  bool known = false;
  for (const char* p : problems) known = known || c.problem == p;
  if (!known) fail("unknown problem '" + c.problem + "'");
  if (c.problem == "dataset" && c.dataset.empty()) fail("problem 'dataset' needs --dataset");
  if (c.dataset_format != "auto" && c.dataset_format != "csv" && c.dataset_format != "libsvm")
    fail("dataset format must be auto, csv or libsvm");
  parse_loss(c.loss);
  parse_method(c.method);
  for (const auto& m : c.methods) parse_method(m);
  if (c.N < 1) fail("budget N must be at least 1");
  if (c.method == "grid" && c.N < 4) fail("grid search needs N >= 4");
  if (c.n < 1) fail("dimension n must be positive");
  if (!(c.kappa >= 1.0)) fail("kappa must be at least 1");
  if (!(c.r >= 2.0)) fail("r must be at least 2");
  if (!(c.radius > 0.0)) fail("radius must be positive");
  if (!(c.weight > 0.0)) fail("weight must be positive");
  if (!(c.lambda > 0.0)) fail("lambda must be positive");
  if (c.rows < 1 || c.cols < 1) fail("rows and cols must be positive");
  if (!(c.condition >= 1.0)) fail("condition must be at least 1");
  if (!(c.noise >= 0.0)) fail("noise must be nonnegative");
  if (c.L0 && !(*c.L0 > 0.0)) fail("L0 must be positive");
  if (c.gamma && !(*c.gamma >= 0.0)) fail("gamma must be nonnegative");
  if (c.C && !(*c.C > 0.0)) fail("C must be positive");
  if (!(c.alpha >= 0.0)) fail("alpha must be nonnegative");
  if (c.eps0 && !(*c.eps0 > 0.0)) fail("eps0 must be positive");
  if (c.f_star && !std::isfinite(*c.f_star)) fail("f-star must be finite");
  if (c.format != "csv" && c.format != "json") fail("format must be csv or json");
}

Problem build_problem(const ExperimentConfig& config) {
  sharp_problem* handle = nullptr;
  const bool from_file = !config.dataset.empty() || config.problem == "dataset";
  const sharp_loss loss = parse_loss(config.loss);
  if (from_file) {
    std::string fmt = config.dataset_format;
    if (fmt == "auto") {
      const std::string ext = fs::path(config.dataset).extension().string();
      fmt = (ext == ".csv" || ext == ".txt") ? "csv" : "libsvm";
    }
    check(sharp_problem_from_dataset(config.dataset.c_str(),
                                     fmt == "csv" ? SHARP_FORMAT_CSV : SHARP_FORMAT_LIBSVM, loss,
                                     config.lambda, &handle),
          "cannot load dataset '" + config.dataset + "'");
  } else if (config.problem == "quadratic") {
    check(sharp_problem_quadratic(config.n, config.kappa, config.seed, &handle), "quadratic");
  } else if (config.problem == "norm-power") {
    check(sharp_problem_norm_power(config.n, config.r, config.radius, config.seed, &handle),
          "norm-power");
  } else if (config.problem == "abs") {
    check(sharp_problem_abs(config.n, config.weight, config.radius, config.seed, &handle), "abs");
  } else {
    check(sharp_problem_synthetic(loss, config.rows, config.cols, config.condition, config.noise,
                                  config.seed, config.lambda, &handle),
          "synthetic");
  }
  Problem problem(handle);
  if (from_file || config.problem == "synthetic") {
    sharp_problem_info info;
    check(sharp_problem_get_info(handle, &info), "problem info");
    if (!info.has_f_star && !config.f_star && config.reference_iterations > 0)
      check(sharp_problem_attach_reference(handle, 1e-12, config.reference_iterations),
            "reference solve");
  }
  return problem;
}

std::string config_json(const ExperimentConfig& c, const std::string& method) {
  nlohmann::json j{{"problem", c.dataset.empty() ? c.problem : "dataset"},
                   {"method", method},
                   {"N", c.N},
                   {"seed", c.seed},
                   {"format", c.format}};
  if (!c.dataset.empty()) {
    j["dataset"] = c.dataset;
    j["loss"] = c.loss;
    j["lambda"] = c.lambda;
  } else if (c.problem == "quadratic") {
    j["n"] = c.n;
    j["kappa"] = c.kappa;
  } else if (c.problem == "norm-power") {
    j["n"] = c.n;
    j["r"] = c.r;
    j["radius"] = c.radius;
  } else if (c.problem == "abs") {
    j["n"] = c.n;
    j["weight"] = c.weight;
    j["radius"] = c.radius;
  } else if (c.problem == "synthetic") {
    j["loss"] = c.loss;
    j["rows"] = c.rows;
    j["cols"] = c.cols;
    j["condition"] = c.condition;
    j["noise"] = c.noise;
    j["lambda"] = c.lambda;
  }
  if (c.L0) j["L0"] = *c.L0;
  if (c.gamma) j["gamma"] = *c.gamma;
  if (c.C) {
    j["C"] = *c.C;
    j["alpha"] = c.alpha;
  }
  if (c.eps0) j["eps0"] = *c.eps0;
  if (c.f_star) j["f_star"] = *c.f_star;
  return j.dump();
}

MethodResult run_method(const Problem& problem, const ExperimentConfig& config,
                        const std::string& method, const std::string& path) {
  MethodResult r;
  r.method = method;
  const sharp_run_options opts = run_options(config, parse_method(method));
  sharp_trace* trace = nullptr;
  if (sharp_run(problem.get(), &opts, &trace) != SHARP_OK) {
    r.error = sharp_last_error();
    return r;
  }
  sharp_trace_get_summary(trace, &r.summary);
  const std::int64_t len = sharp_trace_length(trace);
  for (std::int64_t k = 0; k < len; ++k) {
    sharp_trace_entry e;
    sharp_trace_get_entry(trace, k, &e);
    if (e.restart) r.restart_iterations.push_back(e.iteration);
  }
  double bound = 0.0;
  if (sharp_bound_at(problem.get(), &opts, static_cast<double>(r.summary.iterations), &bound) ==
      SHARP_OK) {
    r.bound = bound;
    r.bound_name = sharp_bound_name(opts.method);
  }
  r.ok = true;
  if (!path.empty()) {
    const std::string meta = config_json(config, method);
    if (sharp_trace_write(trace, path.c_str(), trace_format(config), meta.c_str()) != SHARP_OK) {
      r.ok = false;
      r.error = sharp_last_error();
    } else {
      r.trace_path = path;
    }
  }
  sharp_trace_free(trace);
  return r;
}

int run_command(const ExperimentConfig& config, std::ostream& out) {
  validate(config);
  if (config.method == "grid") return grid_command(config, out);
  const Problem problem = build_problem(config);
  const MethodResult r = run_method(problem, config, config.method, config.out);
  print_summary(out, r);
  if (!r.ok) throw CliError(r.method + " failed: " + r.error);
  return 0;
}

int compare_command(const ExperimentConfig& config, std::ostream& out,
                    std::vector<MethodResult>* results) {
  validate(config);
  if (config.methods.empty()) throw CliError("compare needs --methods", 2);
  const Problem problem = build_problem(config);
  fs::path dir;
  if (!config.out.empty()) dir = prepare_directory(config.out);
  std::vector<MethodResult> local;
  std::vector<MethodResult>& res = results ? *results : local;
  res.clear();
  for (const std::string& m : config.methods) {
    const std::string path = dir.empty() ? "" : (dir / (m + "." + config.format)).string();
    res.push_back(run_method(problem, config, m, path));
  }

  std::ostringstream table;
  table << "method,status,final_f,final_gap,restarts,oracle_calls,backtracks,iterations,bound\n";
  bool all_ok = true;
  for (const MethodResult& r : res) {
    all_ok = all_ok && r.ok;
    table << r.method << ',' << (r.ok ? "ok" : "failed") << ','
          << (r.ok ? number(r.summary.final_value) : "") << ','
          << (r.ok ? optional_number(r.summary.has_gap, r.summary.final_gap) : "") << ','
          << r.summary.restarts << ',' << r.summary.oracle_calls << ',' << r.summary.backtracks
          << ',' << r.summary.iterations << ',' << (r.bound ? number(*r.bound) : "") << '\n';
    print_summary(out, r);
  }
  if (!dir.empty()) write_text(dir / "summary.csv", table.str());
  if (!all_ok) out << "some methods failed\n";
  return all_ok ? 0 : 1;
}

int grid_command(const ExperimentConfig& config, std::ostream& out, GridResult* result) {
  validate(config);
  if (config.N < 4) throw CliError("grid search needs N >= 4", 2);
  const Problem problem = build_problem(config);
  const sharp_run_options opts = run_options(config, SHARP_METHOD_GRID);
  sharp_grid* grid = nullptr;
  check(sharp_grid_run(problem.get(), &opts, config.threads, &grid), "grid search");
  std::unique_ptr<sharp_grid, void (*)(sharp_grid*)> guard(grid, sharp_grid_free);

  fs::path dir;
  if (!config.out.empty()) dir = prepare_directory(config.out);
  GridResult local;
  GridResult& res = result ? *result : local;
  res = GridResult{};
  res.best = sharp_grid_best(grid);
  res.total_iterations = sharp_grid_total_iterations(grid);

  std::ostringstream table;
  table << "i,j,C,alpha,inner_iterations,capped,failed,final_f,final_gap,best\n";
  const std::int64_t size = sharp_grid_size(grid);
  for (std::int64_t k = 0; k < size; ++k) {
    GridResult::Row row{};
    check(sharp_grid_get_run(grid, k, &row.info), "grid run");
    const sharp_trace* trace = sharp_grid_trace(grid, k);
    sharp_trace_summary s;
    check(sharp_trace_get_summary(trace, &s), "grid summary");
    if (!dir.empty()) {
      const fs::path path = dir / ("grid_i" + std::to_string(row.info.i) + "_j" +
                                   std::to_string(row.info.j) + "." + config.format);
      nlohmann::json meta = nlohmann::json::parse(config_json(config, "grid"));
      meta["i"] = row.info.i;
      meta["j"] = row.info.j;
      meta["C"] = row.info.C;
      meta["alpha"] = row.info.alpha;
      check(sharp_trace_write(trace, path.c_str(), trace_format(config), meta.dump().c_str()),
            "writing trace");
      row.trace_path = path.string();
    }
    if (k == res.best && s.has_gap) res.best_gap = s.final_gap;
    table << row.info.i << ',' << row.info.j << ',' << number(row.info.C) << ','
          << number(row.info.alpha) << ',' << row.info.inner_iterations << ',' << row.info.capped
          << ',' << row.info.failed << ',' << number(row.info.final_value) << ','
          << optional_number(s.has_gap, s.final_gap) << ',' << (k == res.best ? 1 : 0) << '\n';
    res.rows.push_back(std::move(row));
  }
  double bound = 0.0;
  if (sharp_bound_at(problem.get(), &opts, static_cast<double>(config.N), &bound) == SHARP_OK)
    res.bound = bound;
  if (!dir.empty()) write_text(dir / "summary.csv", table.str());

  const auto& best = res.rows.at(static_cast<std::size_t>(res.best)).info;
  out << "grid: " << size << " schemes, total inner iterations " << res.total_iterations << '\n'
      << "best: i=" << best.i << " j=" << best.j << " (C=" << number(best.C)
      << ", alpha=" << number(best.alpha) << ") final_f=" << number(best.final_value);
  if (res.best_gap) out << " final_gap=" << number(*res.best_gap);
  if (res.bound) out << " bound[adaptive-grid]=" << number(*res.bound);
  out << '\n';
  if (!dir.empty()) out << "summary: " << (dir / "summary.csv").string() << '\n';
  return 0;
}

}  // namespace sharp::cli
