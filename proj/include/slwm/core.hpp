#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace slwm {

using cplx = std::complex<double>;

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct SLProblem;

// Cauchy data of one solution at a point: u(x) and the quasi-derivative p(x)u'(x).
struct BoundaryData {
  double x = 0.0;
  cplx u{};
  cplx pu{};
};

// [u,v]_p = u * conj(p v') - (p u') * conj(v). Throws if evaluation points differ.
cplx lagrange_bracket(const BoundaryData& u, const BoundaryData& v);

// Three-term sum W(u1,u2)W(u3,u4) + W(u1,u3)W(u4,u2) + W(u1,u4)W(u2,u3) with the
// bilinear Wronskian W(u,v) = u*(pv') - (pu')*v. The bilinear form is what makes
// this vanish identically for complex data; it coincides with the Lagrange
// bracket on real data.
cplx plucker_residual(const BoundaryData& b1, const BoundaryData& b2,
                      const BoundaryData& b3, const BoundaryData& b4);

// Composite 5-point Gauss-Legendre on [a,b] split into n equal cells.
double integrate_gl5(const std::function<double(double)>& f, double a, double b, int cells);
cplx integrate_gl5(const std::function<cplx(double)>& f, double a, double b, int cells);

// Bisects until the two-level GL5 estimates of a cell agree to tol (relative to
// the running total). Endpoints are never evaluated, so integrable endpoint
// singularities are fine.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, int max_depth = 40);

// C^1 data on a grid: values and first derivatives. Derivatives are part of the
// input; nothing here ever differences u numerically.
struct C1Samples {
  std::vector<double> x;
  std::vector<cplx> u;
  std::vector<cplx> du;
};

C1Samples sample_c1(const std::function<cplx(double)>& u,
                    const std::function<cplx(double)>& du,
                    const std::vector<double>& grid);

// (u,v)_w = int u conj(v) w dx over the sampled range, cell-wise GL5 on the
// Hermite interpolants with adaptive splitting where w varies fast. A grid node
// where w is not finite is rejected.
cplx weighted_inner(const SLProblem& prob, const C1Samples& u, const C1Samples& v);
double weighted_norm(const SLProblem& prob, const C1Samples& u);

// | int (au) conj(v) w - int u conj(av) w - [u,v]_p(d) + [u,v]_p(c) | on [c,d],
// c,d grid nodes strictly inside the problem interval. au is formed analytically
// on the interpolant, so the residual is pure quadrature error.
double greens_residual(const SLProblem& prob, const C1Samples& u, const C1Samples& v,
                       double c, double d);

// int p|u'|^2 + int q|u|^2 (+ int V|u|^2 w), the q-term against plain Lebesgue
// measure. Requires u and u' to vanish at both terminal samples.
double quadratic_form(const SLProblem& prob, const C1Samples& u);

// Wave-map energy from nodal samples on a uniform r-grid:
// int (psi_t^2 + psi_r^2) r^2 dr + 2 int sin^2(psi) dr, composite Simpson.
// r=0 in the grid requires psi(0)=0 there.
double energy(const std::vector<double>& psi, const std::vector<double>& psi_t,
              const std::vector<double>& psi_r, const std::vector<double>& r);

struct HardyReport {
  double lhs = 0.0;  // int |u|^2/(x-a)^2
  double rhs = 0.0;  // 4 int |u'|^2
};

// Hardy inequality for C^1 data with u(a)=0; lhs <= rhs. The integrand at x=a
// is continued by |u'(a)|^2.
HardyReport hardy_check(const C1Samples& u);

}  // namespace slwm
