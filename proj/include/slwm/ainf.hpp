#pragma once

#include <vector>

#include "slwm/spectrum.hpp"

namespace slwm {

struct PoleAtNonPositiveInteger : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lanczos approximation (g=7, 9 terms), reflection formula for Re z < 1/2.
// Relative error <= 1e-13 away from the poles.
cplx complex_gamma(cplx z);

struct HypergeomParams {
  double mu = 0.0;
  cplx a, b, c;  // a=(1+2mu+i sqrt7)/4, b=(3+2mu+i sqrt7)/4, c=1+i sqrt7/2
};

HypergeomParams ainf_params(double mu);

// Connection coefficient at lambda = -mu^2 <= 0:
// m = Gamma(a+1-c) Gamma(b+1-c) Gamma(c-1) / (Gamma(a) Gamma(b) Gamma(1-c)).
// |m| = 1 on this axis (verified numerically, not assumed by the root finder).
cplx connection_m(double lambda);

struct PhaseRecord {
  double lambda = 0.0;
  cplx m{};
  double abs_m = 0.0;
  double delta = 0.0;  // pi/2 - arg(m)/2, principal argument
};

PhaseRecord ainf_phase(double lambda);

// Eigenvalues of the limiting operator: mu where the wrapped phase difference
// wrap(arg m(-mu^2) - arg m(0)) changes sign, wrap jumps (|jump| > pi between
// grid points) excluded, each root bisected.
EigenResult find_ainf_eigenvalues(double mu_max = 650.0, double step = 0.25,
                                  double tol = 1e-10);

// Samples of the wrapped phase difference, for the CLI scan output.
void ainf_phase_scan(double mu_max, double step, std::vector<double>& mu,
                     std::vector<double>& dphase);

// rho^2 (u chi' - u' chi) from Cauchy data of the candidate u and the reference
// solution chi at the same rho (real solutions; no conjugation). With pu = p u'
// and p = rho^2 this is u.u * ref.pu - u.pu * ref.u.
cplx boundary_condition_bracket(const BoundaryData& u, const BoundaryData& ref);

// Shooting route, independent of the Gamma formula: integrate the A_inf
// equation at lambda = -mu^2 from the rho=1 side and evaluate the bracket
// against the lambda=0 reference at rho_off, normalized by the oscillation
// amplitudes of both solutions so eigenvalues give |.| << 1.
double ainf_bracket_at(double mu, double rho_off);

}  // namespace slwm
