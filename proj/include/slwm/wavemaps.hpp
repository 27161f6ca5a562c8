#pragma once

#include <functional>
#include <vector>

#include "slwm/core.hpp"
#include "slwm/odeint.hpp"

namespace slwm {

struct NoConvergence : std::runtime_error {
  double best_residual;
  NoConvergence(const std::string& what, double r) : std::runtime_error(what), best_residual(r) {}
};

struct WrongBranch : std::runtime_error {
  int found;
  WrongBranch(const std::string& what, int found_) : std::runtime_error(what), found(found_) {}
};

// f'' in the logarithmic coordinate x = log(alpha + rho):
// f'' = -((e^x+alpha)/(e^x-alpha)) f' + e^{2x} sin(2f)/((1-(e^x-alpha)^2)(e^x-alpha)^2).
double profile_rhs_log(double x, double f, double fp, double alpha);

// Self-similar wave map f_n: f(0)=0, f(1)=pi/2, n equator crossings.
// Left half integrated in x = log(alpha + rho), right half in rho.
struct Profile {
  int n = 0;
  double alpha = 1e-4;
  double slope0 = 0.0;       // b: f ~ b rho at 0
  double slope1 = 0.0;       // s: one-sided f'(1)
  double match_residual = 0.0;
  double rho_lo = 0.0;       // series below this
  double rho_hi = 1.0;       // series above this
  Trajectory<2> left;        // in x, state (f, f_x)
  Trajectory<2> right;       // in rho, state (f, f_rho)

  // f and df/drho anywhere on [0,1]
  void eval(double rho, double& f, double& df) const;
  double f_at(double rho) const;
};

Profile shoot_profile(int n, double alpha = 1e-4, double tol = 1e-10);

int count_equator_crossings(const Profile& prof);

struct GaugeMode {
  std::vector<double> rho;
  std::vector<double> theta;  // rho sqrt(1-rho^2) f'(rho)
  int interior_zeros = 0;
  double residual = 0.0;      // ||a_n theta|| / ||theta|| over [0.05, 0.95]
};

GaugeMode gauge_mode(const Profile& prof);

struct PotentialG {
  std::vector<double> rho;
  std::vector<double> g;
  double sup = 0.0;   // sup |g| over [0,1]
  double at0 = 0.0;   // limit by local expansion: 1 - 4 b^2
  double at1 = 0.0;
};

// g_n(rho) = [2(1-rho^2)cos(2 f_n) - rho^2 - 2(1-rho^2)^2] / rho^2
double potential_g_value(const Profile& prof, double rho);
PotentialG potential_g(const Profile& prof);

// h_n(rho) = 2(1-rho^2)cos(2 f_n)/rho^2 - 1
double h_value(const Profile& prof, double rho);

// inf of a scalar function over (0,1) by grid scan plus golden-section
// refinement; -inf when the scan keeps descending into the left endpoint.
double infimum_on_interval(const std::function<double(double)>& fn, double lo = 1e-8,
                           double hi = 1.0 - 1e-8);

double eigen_lower_bound(const Profile& prof);

}  // namespace slwm
