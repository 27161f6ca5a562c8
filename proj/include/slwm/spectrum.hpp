#pragma once

#include <vector>

#include "slwm/wavemaps.hpp"

namespace slwm {

struct MatchOptions {
  double eps_left = 1e-4;   // launch offsets; trimmed automatically for large b, mu
  double eps_right = 1e-4;
  double rtol = 1e-12;  // W is a near-cancellation at roots; its noise floor is ~rtol
  double atol = 1e-14;
};

// Wronskian W(v_l, v_r)(1/2) = v_l v_r' - v_l' v_r of the two one-sided
// solutions of the transformed eigen-equation at lambda = -mu^2; zero exactly
// at eigenvalues. v = (1-rho^2)^{-(1+mu)/2} u removes the stiff decay at rho=1.
double matching_fn(const Profile& prof, double mu, const MatchOptions& opt = {});

struct EigenvalueHit {
  double mu = 0.0;
  double lambda = 0.0;  // -mu^2
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double matching_residual = 0.0;
};

struct CountMismatch : std::runtime_error {
  int expected;
  int found;
  std::vector<double> scan_mu, scan_val;
  CountMismatch(const std::string& what, int e, int f) : std::runtime_error(what), expected(e), found(f) {}
};

struct EigenResult {
  int n = 0;
  double mu_min = 0.0, mu_max = 0.0, ratio = 0.0;
  std::string method;
  std::vector<EigenvalueHit> eigenvalues;
};

// Geometric scan of matching_fn over [mu_min, mu_max], bisection on each sign
// change to relative tolerance tol. Expects exactly n roots for the profile f_n
// (CountMismatch otherwise, carrying the scan trace).
EigenResult find_eigenvalues(const Profile& prof, double mu_max, double mu_min = 0.2,
                             double ratio = 1.02, double tol = 1e-8, int jobs = 1,
                             bool expect_n = true);

struct FnSamples {
  std::vector<double> rho;
  std::vector<double> u;   // normalized sup = 1
  std::vector<double> du;
  int interior_zeros = 0;
};

// Eigenfunction u = (1-rho^2)^{(1+mu)/2} v from the left-launched solution;
// u(eps) ~ eps at 0 and u(1-eps') ~ eps'^{(1+mu)/2} at 1.
FnSamples eigenfunction(const Profile& prof, double mu, int samples = 400,
                        const MatchOptions& opt = {});

}  // namespace slwm
