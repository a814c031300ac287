#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sharp/sharp.h"

namespace sharp::cli {

/// Raised for bad configurations and failed library calls; `code()` is the
/// process exit status to use.
class CliError : public std::runtime_error {
 public:
  CliError(const std::string& what, int code = 1) : std::runtime_error(what), code_(code) {}
  int code() const noexcept { return code_; }

 private:
  int code_;
};

struct ExperimentConfig {
  // problem
  std::string problem = "quadratic";  // quadratic | norm-power | abs | synthetic | dataset
  std::string dataset;                // path; implies problem = dataset
  std::string dataset_format = "auto";
  std::string loss = "ls";  // ls | logistic | lasso | svm
  std::int64_t n = 10;
  double kappa = 100.0;
  double r = 4.0;
  double radius = 1.0;
  double weight = 1.0;
  double lambda = 1.0;
  std::int64_t rows = 208;
  std::int64_t cols = 60;
  double condition = 1e5;
  double noise = 0.1;
  std::int64_t reference_iterations = 100000;
  // method
  std::string method = "acc";
  std::vector<std::string> methods;  // compare
  std::int64_t N = 1000;
  std::optional<double> L0;
  std::uint64_t seed = 0;
  std::optional<double> gamma;
  std::optional<double> C;
  double alpha = 0.0;
  std::optional<double> eps0;
  std::optional<double> f_star;
  unsigned threads = 0;
  // output
  std::string out;
  std::string format = "csv";
};

/// Throws CliError when a value is out of range; called before any computation.
void validate(const ExperimentConfig& config);

/// Owns a sharp_problem handle.
class Problem {
 public:
  explicit Problem(sharp_problem* handle) : handle_(handle) {}
  Problem(Problem&& other) noexcept : handle_(other.handle_) { other.handle_ = nullptr; }
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;
  Problem& operator=(Problem&&) = delete;
  ~Problem() { sharp_problem_free(handle_); }

  sharp_problem* get() const noexcept { return handle_; }

 private:
  sharp_problem* handle_;
};

Problem build_problem(const ExperimentConfig& config);

struct MethodResult {
  std::string method;
  bool ok = false;
  std::string error;
  sharp_trace_summary summary{};
  std::optional<double> bound;
  std::string bound_name;
  std::vector<std::int64_t> restart_iterations;
  std::string trace_path;
};

/// Runs one method on an existing problem and writes its trace when `path`
/// is non-empty. Failures are reported in the result, not thrown.
MethodResult run_method(const Problem& problem, const ExperimentConfig& config,
                        const std::string& method, const std::string& path);

struct GridResult {
  struct Row {
    sharp_grid_run_info info;
    std::string trace_path;
  };
  std::vector<Row> rows;
  std::int64_t best = -1;
  std::int64_t total_iterations = 0;
  std::optional<double> best_gap;
  std::optional<double> bound;
};

/// Subcommands. Each returns the process exit status and prints a short
/// human-readable report to `out`.
int run_command(const ExperimentConfig& config, std::ostream& out);
int compare_command(const ExperimentConfig& config, std::ostream& out,
                    std::vector<MethodResult>* results = nullptr);
int grid_command(const ExperimentConfig& config, std::ostream& out, GridResult* result = nullptr);

/// JSON echo of the configuration used as trace metadata.
std::string config_json(const ExperimentConfig& config, const std::string& method);

}  // namespace sharp::cli
