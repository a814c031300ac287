#include "sharp/problems.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "sharp/error.hpp"

namespace sharp {

namespace {

Vector gaussian_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector random_direction(Index n, std::mt19937_64& rng) {
  Vector v = gaussian_vector(n, rng);
  while (v.norm() == 0.0) v = gaussian_vector(n, rng);
  return v / v.norm();
}

void check_data(const Dataset& data) {
  if (data.A.rows() < 1 || data.A.cols() < 1) throw InvalidArgument("dataset is empty");
  if (data.b.size() != data.A.rows())
    throw InvalidArgument("dataset has " + std::to_string(data.A.rows()) + " rows but " +
                          std::to_string(data.b.size()) + " targets");
  if (!data.A.allFinite() || !data.b.allFinite())
    throw InvalidArgument("dataset contains non-finite values");
}

// log(1 + e^z) without overflow
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double largest_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

// Perceptron with an epoch cap; true only when a strictly separating
// direction was found.
bool looks_separable(const Matrix& A, const Vector& y) {
  Vector w = Vector::Zero(A.cols());
  const int epochs = 100;
  for (int e = 0; e < epochs; ++e) {
    bool mistake = false;
    for (Index i = 0; i < A.rows(); ++i) {
      if (y(i) * A.row(i).dot(w) <= 0.0) {
        w += y(i) * A.row(i).transpose();
        mistake = true;
      }
    }
    if (!mistake) return w.squaredNorm() > 0.0;
  }
  return false;
}

}  // namespace

Vector to_labels(const Vector& targets) {
  return targets.unaryExpr([](double v) { return v > 0.0 ? 1.0 : -1.0; });
}

Dataset make_synthetic_data(const SyntheticSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1) throw InvalidArgument("synthetic shape must be positive");
  if (!(spec.condition >= 1.0)) throw InvalidArgument("condition must be at least 1");
  if (!(spec.noise >= 0.0)) throw InvalidArgument("noise must be nonnegative");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  Dataset d;
  d.A.resize(spec.rows, spec.cols);
  for (Index j = 0; j < spec.cols; ++j)
    for (Index i = 0; i < spec.rows; ++i) d.A(i, j) = normal(rng);
  const double span = std::sqrt(spec.condition);
  for (Index j = 0; j < spec.cols; ++j) {
    const double frac = spec.cols == 1 ? 0.0 : static_cast<double>(j) / (spec.cols - 1);
    d.A.col(j) *= std::pow(span, -frac);
  }
  const Vector truth = gaussian_vector(spec.cols, rng);
  d.b = d.A * truth;
  for (Index i = 0; i < spec.rows; ++i) d.b(i) += spec.noise * normal(rng);
  return d;
}

ProblemInstance make_quadratic(Index n, double kappa_target, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  if (!(kappa_target >= 1.0) || !std::isfinite(kappa_target))
    throw InvalidArgument("kappa_target must be at least 1");
  std::mt19937_64 rng(seed);
  Matrix G(n, n);
  std::normal_distribution<double> normal;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) G(i, j) = normal(rng);
  const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ();
  Vector spectrum(n);
  for (Index i = 0; i < n; ++i)
    spectrum(i) = n == 1 ? 1.0 : std::pow(kappa_target, -static_cast<double>(i) / (n - 1));
  auto A = std::make_shared<const Matrix>(Q * spectrum.asDiagonal() * Q.transpose());

  ProximalOracle oracle(n, [A](const Vector& x, Vector* grad) {
    Vector Ax = (*A) * x;
    if (grad) *grad = Ax;
    return 0.5 * x.dot(Ax);
  });
  ProblemInstance p{std::move(oracle)};
  p.x0 = random_direction(n, rng);
  const double L = spectrum.maxCoeff();
  const double mu = spectrum.minCoeff() / 2.0;
  p.regularity = RegularityParams(2.0, L, 2.0, mu, 0.0, p.oracle.value(p.x0));
  p.f_star = 0.0;
  p.minimizer = Vector::Zero(n);
  p.distance = [](const Vector& x) { return x.norm(); };
  p.smoothness = L;
  p.sample_radius = 2.0;
  p.name = "quadratic";
  p.seed = seed;
  return p;
}

ProblemInstance make_norm_power(Index n, double r, double radius, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  if (!(r >= 2.0) || !std::isfinite(r)) throw InvalidArgument("exponent r must be at least 2");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("radius must be positive");
  ProximalOracle oracle(n, [r](const Vector& x, Vector* grad) {
    const double nx = x.norm();
    if (grad) {
      if (nx == 0.0)
        grad->setZero(x.size());
      else
        *grad = r * std::pow(nx, r - 2.0) * x;
    }
    return std::pow(nx, r);
  });
  ProblemInstance p{std::move(oracle)};
  std::mt19937_64 rng(seed);
  p.x0 = radius * random_direction(n, rng);
  const double L = r * (r - 1.0) * std::pow(radius, r - 2.0);
  p.regularity = RegularityParams(2.0, L, r, 1.0, 0.0, p.oracle.value(p.x0));
  p.f_star = 0.0;
  p.minimizer = Vector::Zero(n);
  p.distance = [](const Vector& x) { return x.norm(); };
  p.smoothness = L;
  p.sample_radius = radius;
  p.name = "norm-power";
  p.seed = seed;
  return p;
}

ProblemInstance make_abs(Index n, double weight, double radius, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  if (!(weight > 0.0) || !std::isfinite(weight)) throw InvalidArgument("weight must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("radius must be positive");
  ProximalOracle oracle(n, [weight](const Vector& x, Vector* grad) {
    if (grad) *grad = weight * x.unaryExpr([](double v) { return double((v > 0) - (v < 0)); });
    return weight * x.lpNorm<1>();
  });
  ProblemInstance p{std::move(oracle)};
  std::mt19937_64 rng(seed);
  p.x0 = radius * random_direction(n, rng);
  const double L = 2.0 * weight * std::sqrt(static_cast<double>(n));
  p.regularity = RegularityParams(1.0, L, 1.0, weight, 0.0, p.oracle.value(p.x0));
  p.f_star = 0.0;
  p.minimizer = Vector::Zero(n);
  p.distance = [](const Vector& x) { return x.norm(); };
  p.smoothness = L;
  p.sample_radius = radius;
  p.name = "abs";
  p.seed = seed;
  return p;
}

ProblemInstance make_least_squares(const Dataset& data) {
  check_data(data);
  const Index m = data.A.rows();
  const Index n = data.A.cols();
  auto A = std::make_shared<const Matrix>(data.A);
  auto b = std::make_shared<const Vector>(data.b);
  const double scale = 1.0 / static_cast<double>(m);
  ProximalOracle oracle(n, [A, b, scale](const Vector& x, Vector* grad) {
    const Vector res = (*A) * x - *b;
    if (grad) *grad = scale * (A->transpose() * res);
    return 0.5 * scale * res.squaredNorm();
  });
  ProblemInstance p{std::move(oracle)};
  p.name = "least-squares";
  p.x0 = Vector::Zero(n);

  const Matrix H = scale * (data.A.transpose() * data.A);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(H);
  const Vector& ev = eig.eigenvalues();
  const double L = std::max(0.0, ev.maxCoeff());
  const double lmin = ev.minCoeff();
  p.smoothness = L > 0.0 ? L : 1.0;
  const bool full_rank = L > 0.0 && lmin > 1e-12 * L;

  Vector xs;
  if (full_rank) {
    xs = data.A.colPivHouseholderQr().solve(data.b);
  } else {
    xs = data.A.completeOrthogonalDecomposition().solve(data.b);
    p.notes.push_back("rank-deficient design: regularity omitted, minimum-norm minimizer");
  }
  const double fs = 0.5 * scale * (data.A * xs - data.b).squaredNorm();
  p.f_star = fs;
  p.minimizer = xs;
  p.sample_radius = std::max(1.0, xs.norm());
  if (full_rank) {
    p.distance = [xs](const Vector& x) { return (x - xs).norm(); };
    const double gap0 = p.oracle.value(p.x0) - fs;
    p.regularity = RegularityParams(2.0, L, 2.0, lmin / 2.0, fs,
                                    gap0 > 0.0 ? std::optional<double>(gap0) : std::nullopt);
  } else {
    // X* = xs + null(A): distance is the norm of the row-space component
    Matrix basis(n, 0);
    for (Index i = 0; i < n; ++i)
      if (ev(i) > 1e-12 * std::max(L, 1e-300)) {
        basis.conservativeResize(n, basis.cols() + 1);
        basis.col(basis.cols() - 1) = eig.eigenvectors().col(i);
      }
    p.distance = [xs, basis](const Vector& x) { return (basis.transpose() * (x - xs)).norm(); };
  }
  return p;
}

ProblemInstance make_logistic(const Dataset& data) {
  check_data(data);
  const Index m = data.A.rows();
  const Index n = data.A.cols();
  const Vector y = to_labels(data.b);
  auto Z = std::make_shared<const Matrix>(y.asDiagonal() * data.A);
  const double scale = 1.0 / static_cast<double>(m);
  ProximalOracle oracle(n, [Z, scale](const Vector& x, Vector* grad) {
    const Vector margin = (*Z) * x;
    double f = 0.0;
    for (Index i = 0; i < margin.size(); ++i) f += softplus(-margin(i));
    if (grad) {
      const Vector w = margin.unaryExpr([](double v) { return -sigmoid(-v); });
      *grad = scale * (Z->transpose() * w);
    }
    return scale * f;
  });
  ProblemInstance p{std::move(oracle)};
  p.name = "logistic";
  p.x0 = Vector::Zero(n);
  const double L = largest_eigenvalue(data.A.transpose() * data.A) * scale / 4.0;
  p.smoothness = L > 0.0 ? L : 1.0;
  if (looks_separable(data.A, y)) {
    p.has_minimizer = false;
    p.notes.push_back("data are linearly separable: the infimum 0 is not attained");
  }
  return p;
}

ProblemInstance make_lasso(const Dataset& data, double lambda) {
  check_data(data);
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("lambda must be positive");
  const Index m = data.A.rows();
  const Index n = data.A.cols();
  auto A = std::make_shared<const Matrix>(data.A);
  auto b = std::make_shared<const Vector>(data.b);
  const double scale = 1.0 / static_cast<double>(m);
  ProximalOracle oracle(
      n,
      [A, b, scale](const Vector& x, Vector* grad) {
        const Vector res = (*A) * x - *b;
        if (grad) *grad = scale * (A->transpose() * res);
        return 0.5 * scale * res.squaredNorm();
      },
      [lambda](const Vector& x) { return lambda * x.lpNorm<1>(); },
      [lambda](const Vector& x, double step) {
        const double t = lambda * step;
        return Vector(x.unaryExpr([t](double v) {
          return v > t ? v - t : (v < -t ? v + t : 0.0);
        }));
      });
  ProblemInstance p{std::move(oracle)};
  p.name = "lasso";
  p.x0 = Vector::Zero(n);
  const double L = largest_eigenvalue(data.A.transpose() * data.A) * scale;
  p.smoothness = L > 0.0 ? L : 1.0;
  return p;
}

ProblemInstance make_dual_svm(const Dataset& data, double lambda) {
  check_data(data);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidArgument("regularization must be positive");
  const Index m = data.A.rows();
  const Vector y = to_labels(data.b);
  auto Zt = std::make_shared<const Matrix>((y.asDiagonal() * data.A).transpose());
  const double md = static_cast<double>(m);
  const double quad = 1.0 / (lambda * md * md);
  ProximalOracle oracle(
      m,
      [Zt, quad, md](const Vector& a, Vector* grad) {
        const Vector w = (*Zt) * a;
        if (grad) *grad = (quad * (Zt->transpose() * w)).array() - 1.0 / md;
        return 0.5 * quad * w.squaredNorm() - a.sum() / md;
      },
      [](const Vector& a) {
        const bool inside = (a.array() >= 0.0).all() && (a.array() <= 1.0).all();
        return inside ? 0.0 : std::numeric_limits<double>::infinity();
      },
      [](const Vector& a, double) { return Vector(a.cwiseMax(0.0).cwiseMin(1.0)); });
  ProblemInstance p{std::move(oracle)};
  p.name = "dual-svm";
  p.x0 = Vector::Zero(m);
  const double L = largest_eigenvalue(data.A.transpose() * data.A) * quad;
  p.smoothness = L > 0.0 ? L : 1.0;
  return p;
}

ReferenceSolution reference_solve(const ProblemInstance& problem, double tolerance,
                                  std::int64_t max_iterations) {
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be nonnegative");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  const ProximalOracle& f = problem.oracle;
  const double L = problem.smoothness;
  const double step = 1.0 / L;
  Vector x = f.prox(problem.x0, step);
  double fx = f.value(x);
  Vector y = x;
  double t = 1.0;
  Vector grad;
  ReferenceSolution out;
  for (std::int64_t k = 1; k <= max_iterations; ++k) {
    f.smooth_value_and_gradient(y, grad);
    Vector next = f.prox(y - step * grad, step);
    out.mapping_norm = L * (next - y).norm();
    out.iterations = k;
    const double fn = f.value(next);
    if (out.mapping_norm <= tolerance) {
      if (fn <= fx) {
        x = std::move(next);
        fx = fn;
      }
      out.converged = true;
      break;
    }
    if (fn > fx && t > 1.0) {
      // function-value restart: drop momentum, retry from the best point
      t = 1.0;
      y = x;
      continue;
    }
    // with t = 1 this is a plain proximal-gradient step from x; an increase
    // there is rounding, and accepting it keeps the mapping norm shrinking
    // below the resolution of f.
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - x);
    x = std::move(next);
    fx = fn;
    t = t_next;
  }
  out.x = std::move(x);
  out.f_value = fx;
  return out;
}

void attach_reference(ProblemInstance& problem, double tolerance, std::int64_t max_iterations) {
  if (problem.f_star) return;
  const ReferenceSolution ref = reference_solve(problem, tolerance, max_iterations);
  problem.f_star = ref.f_value;
  problem.f_star_tolerance = ref.mapping_norm;
  if (problem.has_minimizer) problem.minimizer = ref.x;
  if (!ref.converged)
    problem.notes.push_back("reference solve stopped at mapping norm " +
                            std::to_string(ref.mapping_norm));
}

double gradient_check_error(const ProximalOracle& oracle, const Vector& x, double step) {
  Vector g;
  oracle.smooth_value_and_gradient(x, g);
  Vector fd(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + h;
    const double up = oracle.smooth_value(probe);
    probe(i) = x(i) - h;
    const double down = oracle.smooth_value(probe);
    probe(i) = x(i);
    fd(i) = (up - down) / (2.0 * h);
  }
  return (fd - g).norm() / std::max(1.0, g.norm());
}

std::vector<Vector> sample_points(const ProblemInstance& problem, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index n = problem.dimension();
  const Vector center = problem.minimizer ? *problem.minimizer : Vector::Zero(n);
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 0; k < count; ++k) {
    const double radius = problem.sample_radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
    pts.push_back(center + radius * random_direction(n, rng));
  }
  return pts;
}

}  // namespace sharp
