#pragma once

#include <functional>
#include <optional>
#include <string>

#include "slwm/core.hpp"
#include "slwm/frobenius.hpp"

namespace slwm {

// alpha u = (1/w)(-(p u')' + q u) + V u on (a,b), H = L^2_w. V is optional
// (the linearized operators carry the profile potential there).
struct SLProblem {
  std::string name;
  double a = 0.0;
  double b = 1.0;
  bool b_infinite = false;

  std::function<double(double)> p, dp, q, w;
  std::function<double(double)> potential;  // may be empty

  // lambda-dependent local data for (alpha - lambda)u = 0 at each endpoint;
  // empty at an endpoint without a power-law structure (then only the numeric
  // classification route applies).
  std::function<LocalExpansion(cplx lambda, int K)> left_expansion;
  std::function<LocalExpansion(cplx lambda, int K)> right_expansion;

  // leading powers of the coefficients at each endpoint, for the regularity test
  struct EndpointPowers {
    double p_exp = 0.0, q_exp = 0.0, w_exp = 0.0;
    bool known = false;
  };
  EndpointPowers left_powers, right_powers;

  double q_total(double x) const {
    double v = q(x);
    if (potential) v += potential(x) * w(x);
    return v;
  }
};

struct Profile;  // wavemaps.hpp

// Built-in problems:
//   wavemap_A          p=rho^2, q=2, w=rho^2/(1-rho^2)^2 on (0,1)
//   A_n                wavemap_A plus the profile potential g_n (needs a profile)
//   A_inf              p=rho^2, q=(rho^2-2)/(1-rho^2)^2, same w, on (0,1)
//   dirichlet_laplacian p=w=1, q=0 on (0,1)
//   linwm_halfline     p=w=r^2, q=2 on (0,inf)
SLProblem make_builtin(const std::string& id, const Profile* profile = nullptr);

// {name?, interval, builtin, n?}; interval [a, b] with "inf" allowed for b.
SLProblem load_problem_json(const std::string& path);
SLProblem parse_problem_json(const std::string& text);

}  // namespace slwm
