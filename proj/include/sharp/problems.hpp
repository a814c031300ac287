#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sharp/core.hpp"

namespace sharp {

/// Design matrix (one sample per row) and targets.
struct Dataset {
  Matrix A;
  Vector b;
};

enum class DatasetFormat { kCsv, kLibsvm };

/// CSV: comma separated, no header, last column is the target.
Dataset parse_csv(std::istream& in);
/// LibSVM: "label idx:val ..." with 1-based strictly increasing indices. The
/// dimension is the largest index seen unless `dimension` is given.
Dataset parse_libsvm(std::istream& in, std::optional<Index> dimension = std::nullopt);
/// Throws IoError naming the path when the file cannot be opened.
Dataset load_dataset(const std::string& path, DatasetFormat format,
                     std::optional<Index> dimension = std::nullopt);

/// Maps targets to class labels: > 0 becomes +1, anything else -1.
Vector to_labels(const Vector& targets);

struct SyntheticSpec {
  Index rows = 208;
  Index cols = 60;
  double condition = 1e5;  // ratio of the largest to smallest column scale, squared
  double noise = 0.1;
  std::uint64_t seed = 0;
};

/// Gaussian design with log-spaced column scales and a planted linear model
/// plus noise. Targets are real-valued; classification losses use their sign.
Dataset make_synthetic_data(const SyntheticSpec& spec);

struct ProblemInstance {
  explicit ProblemInstance(ProximalOracle f) : oracle(std::move(f)) {}

  ProximalOracle oracle;
  std::optional<RegularityParams> regularity;
  std::optional<double> f_star;
  /// Set when f_star comes from a numerical reference solve: the final
  /// gradient-mapping norm of that solve.
  std::optional<double> f_star_tolerance;
  DistanceFn distance;              // d(x, X*), empty when unknown
  std::optional<Vector> minimizer;  // a point of X*
  Vector x0;                        // default starting point
  double smoothness = 1.0;          // Lipschitz constant of the smooth part (L0 default)
  double sample_radius = 1.0;       // regularity is validated on this ball around the minimizer
  bool has_minimizer = true;        // false for separable logistic data
  std::string name;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> notes;

  Index dimension() const { return oracle.dimension(); }
};

/// f = x'Ax/2 with a random orthogonal basis and spectrum log-spaced in
/// [1/kappa_target, 1]. Regularity (2, lambda_max, 2, lambda_min/2).
ProblemInstance make_quadratic(Index n, double kappa_target, std::uint64_t seed);

/// f = |x|^r, sharp with (r, 1) and smooth with s = 2 on the ball of radius
/// `radius` (L = r(r-1) radius^{r-2}). The default start lies on that sphere.
ProblemInstance make_norm_power(Index n, double r, double radius, std::uint64_t seed = 0);

/// f = w |x|_1, Hölder with s = 1, L = 2 w sqrt(n), sharp with r = 1, mu = w.
ProblemInstance make_abs(Index n, double weight = 1.0, double radius = 1.0,
                         std::uint64_t seed = 0);

/// f = |Ax - b|^2 / (2m).
ProblemInstance make_least_squares(const Dataset& data);
/// f = (1/m) sum log(1 + exp(-y_i a_i'x)), labels from to_labels.
ProblemInstance make_logistic(const Dataset& data);
/// f = |Ax - b|^2 / (2m) + lambda |x|_1.
ProblemInstance make_lasso(const Dataset& data, double lambda = 1.0);
/// Dual of the squared-norm regularized hinge-loss SVM, written as a
/// minimization over alpha in [0, 1]^m:
/// f = |Z'alpha|^2 / (2 lambda m^2) - sum(alpha) / m, Z = diag(y) A.
ProblemInstance make_dual_svm(const Dataset& data, double lambda = 1.0);

struct ReferenceSolution {
  Vector x;
  double f_value = 0.0;
  double mapping_norm = 0.0;  // L |x - prox(x - grad/L, 1/L)| at the end
  std::int64_t iterations = 0;
  bool converged = false;
};

/// Restarted FISTA with step 1/L until the gradient-mapping norm drops below
/// `tolerance` or `max_iterations` is reached.
ReferenceSolution reference_solve(const ProblemInstance& problem, double tolerance = 1e-12,
                                  std::int64_t max_iterations = 1000000);

/// Fills f_star (and its tolerance) from reference_solve when unknown.
void attach_reference(ProblemInstance& problem, double tolerance = 1e-12,
                      std::int64_t max_iterations = 1000000);

/// |g_fd - g| / max(1, |g|) for the smooth part, g_fd by central differences.
double gradient_check_error(const ProximalOracle& oracle, const Vector& x, double step = 1e-6);

/// `count` points drawn uniformly in the validation ball of the instance.
std::vector<Vector> sample_points(const ProblemInstance& problem, int count, std::uint64_t seed);

}  // namespace sharp
