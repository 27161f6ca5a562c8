#pragma once

#include <functional>
#include <vector>

#include "slwm/core.hpp"

namespace slwm {

enum class Side { left, right };

struct ResonantIndex : std::runtime_error {
  int k;
  ResonantIndex(int k_, const std::string& what) : std::runtime_error(what), k(k_) {}
};

struct TruncationBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Normalized data of u'' + P u' + Q u = 0 near a regular singular point x0, in
// the local variable t = |x - x0|: pcoef/qcoef are the Taylor coefficients of
// t*P_local(t) and t^2*Q_local(t). For a right endpoint the substitution
// x = x0 - t flips the sign of P, which the builders fold in.
struct LocalExpansion {
  double x0 = 0.0;
  Side side = Side::left;
  std::vector<cplx> pcoef;
  std::vector<cplx> qcoef;
  double w_exponent = 0.0;
  double radius = 1.0;  // distance to the next singularity, for the launch guard
  std::function<double(double)> p_of_x;  // actual p, for quasi-derivatives
};

struct IndicialPair {
  cplx s_minus;  // |s_minus| <= |s_plus|
  cplx s_plus;
  bool resonance = false;  // s_plus - s_minus is a (possibly zero) integer
};

IndicialPair indices(const LocalExpansion& ex);

// u(t) = sum_k c_k t^{s+k}, c_0 = 1.
struct SeriesSolution {
  LocalExpansion ex;
  cplx s;
  std::vector<cplx> c;

  cplx eval_local(double t) const;
  cplx deriv_local(double t) const;  // d/dt
  double x_at(double t) const { return ex.side == Side::left ? ex.x0 + t : ex.x0 - t; }
  // |largest retained term| / |partial sum| at offset t
  double truncation_estimate(double t) const;
};

SeriesSolution series_solution(const LocalExpansion& ex, cplx s, int K = 12);

// Cauchy data (u, p u') at x0 +- eps, from the truncated series.
BoundaryData launch(const LocalExpansion& ex, cplx s, double eps, int K = 12,
                    double trunc_tol = 1e-8);
BoundaryData launch(const SeriesSolution& sol, double eps, double trunc_tol = 1e-8);

// u' in x (not t) at x0 +- eps, for starting an integrator.
void launch_state(const SeriesSolution& sol, double eps, cplx& u, cplx& du_dx);

}  // namespace slwm
