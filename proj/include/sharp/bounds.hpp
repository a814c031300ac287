#pragma once

#include <string_view>

#include "sharp/core.hpp"

namespace sharp {

// Closed-form convergence guarantees. N is always a real number of inner
// iterations; branches on tau use tau == 0 exactly.

/// N = sum_{k=1}^R C e^{alpha k}; equals R C when alpha = 0.
double schedule_total(double C, double alpha, double R);

/// Inverse of schedule_total in R.
double restart_count(double C, double alpha, double N);

/// C*_{kappa,tau} = e^{1-tau} (c kappa)^{1/2} gap0^{-tau/2} (smooth case).
double optimal_constant_smooth(const DerivedConditioning& cond, double gap0, double c);

/// C*_{kappa,tau,q} = e^{1-tau} (c kappa)^{s/2q} eps0^{-tau/q} (Hölder case).
double optimal_constant_holder(const DerivedConditioning& cond, double eps0, double c);

/// C(alpha) = e^{alpha (1-tau)/tau} (c kappa)^{1/2} gap0^{-tau/2}; requires tau > 0.
double constant_for_rate(const DerivedConditioning& cond, double gap0, double c, double alpha);

/// Guarantee of the optimal smooth schedule after N iterations.
double bound_smooth(const DerivedConditioning& cond, double gap0, double c, double N);

struct GenericBound {
  double value;
  bool precondition_met;  // C >= C*_{kappa,0} (tau = 0) or C >= C(alpha) (tau > 0)
  double required_C;
};

/// Guarantee of a generic schedule C e^{alpha k} (alpha must be 0 when tau = 0).
GenericBound bound_generic(const DerivedConditioning& cond, double gap0, double c, double C,
                           double alpha, double N);

/// Guarantee of the Hölder scheduled restart with gamma = q (also the
/// criterion-restart guarantee with eps0 = f(x0) - f*).
double bound_holder(const DerivedConditioning& cond, double eps0, double c, double N);

/// Guarantee of plain gradient descent read as an implicit restart scheme.
double bound_gradient_descent(const DerivedConditioning& cond, double gap0, double N);

/// Precision after N iterations of a real schedule C e^{alpha k} when the
/// restart points converge as nu e^{-gamma k}.
double bound_schedule(double nu, double gamma, double C, double alpha, double N);

/// Same as bound_schedule for the integer schedule ceil(C e^{alpha k}).
double bound_rounded(double nu, double gamma, double C, double alpha, double N);

/// Smallest t_k guaranteeing f(x_k) - f* <= e^{-gamma k} gap0 (smooth case).
double schedule_threshold(const DerivedConditioning& cond, double gap0, double c, double gamma,
                          double k);

/// Hölder analogue: t_k reaching eps_k = e^{-gamma k} eps0 with the universal method.
double schedule_threshold_holder(const DerivedConditioning& cond, double eps0, double c,
                                 double gamma, double k);

/// Guarantee of the best scheme of the logarithmic grid search (smooth case).
double bound_adaptive(const DerivedConditioning& cond, double gap0, double c, double N);

/// c L d0^2 / t^2.
double bound_accelerated(double c, double L, double d0, double t);

/// eps/2 + [c L^{2/s} d0^2 / (eps^{2/s} t^{2q/s})] eps/2.
double bound_universal(double c, double s, double L, double d0, double epsilon, double t);

enum class EnvelopeKind {
  kSmoothTau0,
  kSmoothTauPos,
  kGenericTau0,
  kGenericTauPos,
  kHolderTau0,
  kHolderTauPos,
  kGradientTau0,
  kGradientTauPos,
  kAdaptiveTau0,
  kAdaptiveTauPos,
  kSchedule,
  kRounded,
};

std::string_view envelope_name(EnvelopeKind kind);

/// A guarantee with its parameters frozen, evaluated as a function of N.
class BoundEnvelope {
 public:
  struct Params {
    double kappa = 0, tau = 0, q = 2, s = 2, c = 4;
    double gap0 = 1;  // gap0 or eps0
    double C = 1, alpha = 0, gamma = 0;
  };

  static BoundEnvelope smooth(const DerivedConditioning& cond, double gap0, double c);
  static BoundEnvelope generic(const DerivedConditioning& cond, double gap0, double c, double C,
                               double alpha);
  static BoundEnvelope holder(const DerivedConditioning& cond, double eps0, double c);
  static BoundEnvelope gradient_descent(const DerivedConditioning& cond, double gap0);
  static BoundEnvelope adaptive(const DerivedConditioning& cond, double gap0, double c);
  static BoundEnvelope schedule(double nu, double gamma, double C, double alpha);
  static BoundEnvelope rounded(double nu, double gamma, double C, double alpha);

  EnvelopeKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return envelope_name(kind_); }
  const Params& params() const noexcept { return params_; }
  double evaluate(double N) const;

 private:
  BoundEnvelope(EnvelopeKind kind, Params params) : kind_(kind), params_(params) {}
  DerivedConditioning conditioning() const;

  EnvelopeKind kind_;
  Params params_;
};

}  // namespace sharp
