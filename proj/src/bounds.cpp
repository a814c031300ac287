#include "sharp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sharp/error.hpp"

namespace sharp {

namespace {

constexpr double kInvE = 0.36787944117144233;  // e^{-1}

// base / (1 + x)^p computed without losing the small-x regime.
double shrink(double base, double x, double p) { return base * std::exp(-p * std::log1p(x)); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0)) throw InvalidArgument(std::string(name) + " must be positive");
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0)) throw InvalidArgument(std::string(name) + " must be nonnegative");
}

}  // namespace

double schedule_total(double C, double alpha, double R) {
  require_positive(C, "C");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(R, "R");
  if (alpha == 0.0) return R * C;
  return C * std::exp(alpha) * std::expm1(alpha * R) / std::expm1(alpha);
}

double restart_count(double C, double alpha, double N) {
  require_positive(C, "C");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(N, "N");
  if (alpha == 0.0) return N / C;
  return std::log1p(-std::expm1(-alpha) * N / C) / alpha;
}

double optimal_constant_smooth(const DerivedConditioning& cond, double gap0, double c) {
  require_positive(gap0, "gap0");
  return std::exp(1.0 - cond.tau) * std::sqrt(c * cond.kappa) * std::pow(gap0, -cond.tau / 2.0);
}

double optimal_constant_holder(const DerivedConditioning& cond, double eps0, double c) {
  require_positive(eps0, "eps0");
  return std::exp(1.0 - cond.tau) * std::pow(c * cond.kappa, cond.s / (2.0 * cond.q)) *
         std::pow(eps0, -cond.tau / cond.q);
}

double constant_for_rate(const DerivedConditioning& cond, double gap0, double c, double alpha) {
  if (!(cond.tau > 0.0)) throw InvalidArgument("C(alpha) is defined for tau > 0 only");
  require_positive(gap0, "gap0");
  return std::exp(alpha * (1.0 - cond.tau) / cond.tau) * std::sqrt(c * cond.kappa) *
         std::pow(gap0, -cond.tau / 2.0);
}

double bound_smooth(const DerivedConditioning& cond, double gap0, double c, double N) {
  require_positive(gap0, "gap0");
  require_nonnegative(N, "N");
  const double rate = kInvE / std::sqrt(c * cond.kappa);
  if (cond.tau == 0.0) return gap0 * std::exp(-2.0 * rate * N);
  const double tau = cond.tau;
  return shrink(gap0, tau * rate * std::pow(gap0, tau / 2.0) * N, 2.0 / tau);
}

GenericBound bound_generic(const DerivedConditioning& cond, double gap0, double c, double C,
                           double alpha, double N) {
  require_positive(gap0, "gap0");
  require_positive(C, "C");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(N, "N");
  GenericBound out{};
  if (cond.tau == 0.0) {
    out.required_C = std::exp(1.0) * std::sqrt(c * cond.kappa);
    out.precondition_met = C >= out.required_C && alpha == 0.0;
    out.value = gap0 * std::exp(N / C * std::log(c * cond.kappa / (C * C)));
    return out;
  }
  out.required_C = constant_for_rate(cond, gap0, c, alpha);
  out.precondition_met = C >= out.required_C;
  out.value = shrink(gap0, alpha * std::exp(-alpha) * N / C, 2.0 / cond.tau);
  return out;
}

double bound_holder(const DerivedConditioning& cond, double eps0, double c, double N) {
  require_positive(eps0, "eps0");
  require_nonnegative(N, "N");
  const double q = cond.q;
  const double rate = kInvE * std::pow(c * cond.kappa, -cond.s / (2.0 * q));
  if (cond.tau == 0.0) return eps0 * std::exp(-q * rate * N);
  const double tau = cond.tau;
  return shrink(eps0, tau * rate * std::pow(eps0, tau / q) * N, q / tau);
}

double bound_gradient_descent(const DerivedConditioning& cond, double gap0, double N) {
  require_positive(gap0, "gap0");
  require_nonnegative(N, "N");
  const double rate = kInvE / cond.kappa;
  if (cond.tau == 0.0) return gap0 * std::exp(-rate * N);
  const double tau = cond.tau;
  return shrink(gap0, tau * rate * std::pow(gap0, tau) * N, 1.0 / tau);
}

double bound_schedule(double nu, double gamma, double C, double alpha, double N) {
  require_nonnegative(nu, "nu");
  require_nonnegative(gamma, "gamma");
  require_positive(C, "C");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(N, "N");
  if (alpha == 0.0) return nu * std::exp(-gamma * N / C);
  return shrink(nu, alpha * std::exp(-alpha) * N / C, gamma / alpha);
}

double bound_rounded(double nu, double gamma, double C, double alpha, double N) {
  require_nonnegative(nu, "nu");
  require_nonnegative(gamma, "gamma");
  require_positive(C, "C");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(N, "N");
  if (alpha == 0.0) return nu * std::exp(-gamma * N / (C + 1.0));
  // N' = N - log((e^a - 1) e^{-a} N / C + 1) / a  bounds the real-schedule total from below
  const double reduced = std::max(0.0, N - std::log1p(-std::expm1(-alpha) * N / C) / alpha);
  return shrink(nu, alpha * std::exp(-alpha) * reduced / C, gamma / alpha);
}

double schedule_threshold(const DerivedConditioning& cond, double gap0, double c, double gamma,
                          double k) {
  require_positive(gap0, "gap0");
  const double tau = cond.tau;
  return std::exp(gamma * (1.0 - tau) / 2.0) * std::sqrt(c * cond.kappa) *
         std::pow(gap0, -tau / 2.0) * std::exp(tau * gamma * k / 2.0);
}

double schedule_threshold_holder(const DerivedConditioning& cond, double eps0, double c,
                                 double gamma, double k) {
  require_positive(eps0, "eps0");
  const double tau = cond.tau;
  const double q = cond.q;
  return std::exp(gamma * (1.0 - tau) / q) * std::pow(c * cond.kappa, cond.s / (2.0 * q)) *
         std::pow(eps0, -tau / q) * std::exp(gamma * tau * k / q);
}

double bound_adaptive(const DerivedConditioning& cond, double gap0, double c, double N) {
  require_positive(gap0, "gap0");
  require_nonnegative(N, "N");
  const double rate = kInvE / std::sqrt(c * cond.kappa);
  if (cond.tau == 0.0) return gap0 * std::exp(-rate * N);
  const double tau = cond.tau;
  const double effective = std::max(N - 1.0, 0.0) / 4.0;
  return shrink(gap0, tau * rate * std::pow(gap0, tau / 2.0) * effective, 2.0 / tau);
}

double bound_accelerated(double c, double L, double d0, double t) {
  require_positive(t, "t");
  return c * L * d0 * d0 / (t * t);
}

double bound_universal(double c, double s, double L, double d0, double epsilon, double t) {
  require_positive(t, "t");
  require_nonnegative(epsilon, "epsilon");
  const double q = (3.0 * s - 2.0) / 2.0;
  if (epsilon == 0.0) {
    if (s < 2.0) return std::numeric_limits<double>::infinity();
    return c * L * d0 * d0 / (2.0 * t * t);
  }
  const double ratio = c * std::pow(L, 2.0 / s) * d0 * d0 /
                       (std::pow(epsilon, 2.0 / s) * std::pow(t, 2.0 * q / s));
  return epsilon / 2.0 + ratio * epsilon / 2.0;
}

std::string_view envelope_name(EnvelopeKind kind) {
  switch (kind) {
    case EnvelopeKind::kSmoothTau0: return "smooth-tau0";
    case EnvelopeKind::kSmoothTauPos: return "smooth-tau+";
    case EnvelopeKind::kGenericTau0: return "generic-tau0";
    case EnvelopeKind::kGenericTauPos: return "generic-tau+";
    case EnvelopeKind::kHolderTau0: return "holder-tau0";
    case EnvelopeKind::kHolderTauPos: return "holder-tau+";
    case EnvelopeKind::kGradientTau0: return "gd-tau0";
    case EnvelopeKind::kGradientTauPos: return "gd-tau+";
    case EnvelopeKind::kAdaptiveTau0: return "adaptive-tau0";
    case EnvelopeKind::kAdaptiveTauPos: return "adaptive-tau+";
    case EnvelopeKind::kSchedule: return "schedule";
    case EnvelopeKind::kRounded: return "rounded";
  }
  return "unknown";
}

namespace {

BoundEnvelope::Params from_conditioning(const DerivedConditioning& cond, double gap0, double c) {
  BoundEnvelope::Params p;
  p.kappa = cond.kappa;
  p.tau = cond.tau;
  p.q = cond.q;
  p.s = cond.s;
  p.c = c;
  p.gap0 = gap0;
  return p;
}

}  // namespace

BoundEnvelope BoundEnvelope::smooth(const DerivedConditioning& cond, double gap0, double c) {
  require_positive(gap0, "gap0");
  return {cond.tau == 0.0 ? EnvelopeKind::kSmoothTau0 : EnvelopeKind::kSmoothTauPos,
          from_conditioning(cond, gap0, c)};
}

BoundEnvelope BoundEnvelope::generic(const DerivedConditioning& cond, double gap0, double c,
                                     double C, double alpha) {
  require_positive(gap0, "gap0");
  auto p = from_conditioning(cond, gap0, c);
  p.C = C;
  p.alpha = alpha;
  return {cond.tau == 0.0 ? EnvelopeKind::kGenericTau0 : EnvelopeKind::kGenericTauPos, p};
}

BoundEnvelope BoundEnvelope::holder(const DerivedConditioning& cond, double eps0, double c) {
  require_positive(eps0, "eps0");
  return {cond.tau == 0.0 ? EnvelopeKind::kHolderTau0 : EnvelopeKind::kHolderTauPos,
          from_conditioning(cond, eps0, c)};
}

BoundEnvelope BoundEnvelope::gradient_descent(const DerivedConditioning& cond, double gap0) {
  require_positive(gap0, "gap0");
  return {cond.tau == 0.0 ? EnvelopeKind::kGradientTau0 : EnvelopeKind::kGradientTauPos,
          from_conditioning(cond, gap0, 1.0)};
}

BoundEnvelope BoundEnvelope::adaptive(const DerivedConditioning& cond, double gap0, double c) {
  require_positive(gap0, "gap0");
  return {cond.tau == 0.0 ? EnvelopeKind::kAdaptiveTau0 : EnvelopeKind::kAdaptiveTauPos,
          from_conditioning(cond, gap0, c)};
}

BoundEnvelope BoundEnvelope::schedule(double nu, double gamma, double C, double alpha) {
  Params p;
  p.gap0 = nu;
  p.gamma = gamma;
  p.C = C;
  p.alpha = alpha;
  return {EnvelopeKind::kSchedule, p};
}

BoundEnvelope BoundEnvelope::rounded(double nu, double gamma, double C, double alpha) {
  Params p;
  p.gap0 = nu;
  p.gamma = gamma;
  p.C = C;
  p.alpha = alpha;
  return {EnvelopeKind::kRounded, p};
}

DerivedConditioning BoundEnvelope::conditioning() const {
  return {params_.kappa, params_.tau, params_.q, params_.s};
}

double BoundEnvelope::evaluate(double N) const {
  const auto& p = params_;
  switch (kind_) {
    case EnvelopeKind::kSmoothTau0:
    case EnvelopeKind::kSmoothTauPos: return bound_smooth(conditioning(), p.gap0, p.c, N);
    case EnvelopeKind::kGenericTau0:
    case EnvelopeKind::kGenericTauPos:
      return bound_generic(conditioning(), p.gap0, p.c, p.C, p.alpha, N).value;
    case EnvelopeKind::kHolderTau0:
    case EnvelopeKind::kHolderTauPos: return bound_holder(conditioning(), p.gap0, p.c, N);
    case EnvelopeKind::kGradientTau0:
    case EnvelopeKind::kGradientTauPos: return bound_gradient_descent(conditioning(), p.gap0, N);
    case EnvelopeKind::kAdaptiveTau0:
    case EnvelopeKind::kAdaptiveTauPos: return bound_adaptive(conditioning(), p.gap0, p.c, N);
    case EnvelopeKind::kSchedule: return bound_schedule(p.gap0, p.gamma, p.C, p.alpha, N);
    case EnvelopeKind::kRounded: return bound_rounded(p.gap0, p.gamma, p.C, p.alpha, N);
  }
  return p.gap0;
}

}  // namespace sharp
