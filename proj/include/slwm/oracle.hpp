#pragma once

#include <memory>
#include <vector>

#include "slwm/problem.hpp"

namespace slwm {

struct NotNonnegative : std::runtime_error {
  double lambda_min;
  NotNonnegative(const std::string& what, double lmin)
      : std::runtime_error(what), lambda_min(lmin) {}
};

struct EigenDecomp {
  std::vector<double> lam;  // ascending
  std::vector<double> vec;  // column-major, orthonormal in the symmetrized frame
  int n = 0;
  double at(int i, int j) const { return vec[j * n + i]; }
};

// Conservative second-order discretization on interior nodes x_i = a + i h,
// i = 1..N-1, Dirichlet at both ends:
//   (L u)_i = (1/w_i)[-p_{i+1/2}(u_{i+1}-u_i)/h^2 + p_{i-1/2}(u_i-u_{i-1})/h^2]
//             + (q_i + V_i w_i)/w_i u_i.
// Stored in the symmetrized frame T = D L D^{-1}, D = diag(sqrt(w_i)).
struct DiscreteOperator {
  int N = 0;  // number of cells; N-1 interior nodes
  double h = 0.0;
  double a = 0.0;
  std::vector<double> rho;   // interior nodes
  std::vector<double> w;     // weight at nodes
  std::vector<double> sqrtw;
  std::vector<double> diag;  // T diagonal
  std::vector<double> off;   // T super/sub diagonal, size N-2

  std::vector<double> apply_sym(const std::vector<double>& z) const;
  std::vector<double> apply(const std::vector<double>& u) const;  // L in the u-frame
  double inner_w(const std::vector<double>& u, const std::vector<double>& v) const;

  mutable std::shared_ptr<EigenDecomp> decomp;  // cached by eigen_full
};

// potential: samples of V at the interior nodes (size N-1) or empty.
DiscreteOperator discretize(const SLProblem& prob, const std::vector<double>& potential,
                            int N);

// Sturm-sequence count of eigenvalues of T strictly below x.
int count_below(const DiscreteOperator& op, double x);

// All negative eigenvalues, ascending, via bisection on the Sturm count.
std::vector<double> eigen_negative(const DiscreteOperator& op);

// Full decomposition (implicit-shift QL), cached on the operator.
const EigenDecomp& eigen_full(const DiscreteOperator& op);

struct WaveState {
  double t = 0.0;
  std::vector<double> u;
  std::vector<double> ut;
};

// u(t) = Q cos(t sqrt(L)) Q^T u0 + Q f_t(sqrt(L)) Q^T u1 in the symmetrized
// frame, f_t(l) = sin(t l)/l for l > 0 and t at l = 0. Rejects operators with
// genuinely negative spectrum; roundoff-level negatives are clamped to 0.
WaveState evolve_functional_calculus(const DiscreteOperator& op, const std::vector<double>& u0,
                                     const std::vector<double>& u1, double t);

// ||L^{1/2} u||_w^2 + ||v||_w^2, the conserved quantity of the wave flow.
double discrete_wave_energy(const DiscreteOperator& op, const std::vector<double>& u,
                            const std::vector<double>& v);

}  // namespace slwm
