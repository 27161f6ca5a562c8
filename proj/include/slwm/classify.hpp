#pragma once

#include <string>

#include "slwm/problem.hpp"

namespace slwm {

enum class EndpointClass { Regular, LimitCircle, LimitPoint, Inconclusive };

std::string to_string(EndpointClass c);

struct EndpointReport {
  EndpointClass cls = EndpointClass::Inconclusive;
  cplx s_lo{}, s_hi{};            // Frobenius indices used (when available)
  double crit_lo = 0.0;           // 2 Re(s) + w_exponent per index
  double crit_hi = 0.0;
  bool borderline = false;        // a criterion value within delta of -1
  bool used_numeric = false;
  EndpointClass numeric_cls = EndpointClass::Inconclusive;  // attached fallback result
  std::string evidence;
};

// Regular iff the endpoint is finite and 1/p, q, w are integrable near it
// (power test on the endpoint exponents); else limit-circle iff both index
// solutions of (lambda - alpha)u = 0 satisfy 2 Re(s) + w_exp > -1; else
// limit-point. Criterion values within delta of -1 defer to the numeric check.
EndpointReport classify_endpoint(const SLProblem& prob, Side side, cplx lambda = cplx(0, 1),
                                 double delta = 1e-9);

struct WeylFit {
  double slope = 0.0;
  double r2 = 0.0;
  bool in_space = false;
};

struct WeylReport {
  EndpointClass cls = EndpointClass::Inconclusive;
  WeylFit fit1, fit2;  // one per independent solution
  std::string note;
};

// Integrates two independent solutions of (lambda - alpha)u = 0 toward the
// endpoint and regresses log of the window integrals int |u|^2 w: windows shrink
// geometrically at a finite endpoint, advance arithmetically at an infinite one.
// A solution is in H iff the fitted slope decreases; R^2 < 0.99 -> Inconclusive.
WeylReport weyl_numeric_check(const SLProblem& prob, Side side, cplx lambda = cplx(0, 1));

struct SelfAdjointnessReport {
  EndpointReport left, right;
  int defect_plus = 0;
  int defect_minus = 0;
  bool max_domain_selfadjoint = false;
  std::string boundary_condition_needed_at;  // "", "left", "right", "left,right"
};

// d+ = d- = number of endpoints classified Regular or LimitCircle.
SelfAdjointnessReport defect_indices(const SLProblem& prob);

}  // namespace slwm
