#include "slwm/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace slwm {

namespace {

// eigenvalue range of a symmetric tridiagonal by Gershgorin
void gershgorin(const std::vector<double>& d, const std::vector<double>& e, double& lo,
                double& hi) {
  lo = d[0];
  hi = d[0];
  const int n = static_cast<int>(d.size());
  for (int i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::abs(e[i - 1]);
    if (i + 1 < n) r += std::abs(e[i]);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
}

int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  // negatives in the LDL^T pivot recurrence
  int count = 0;
  double q = d[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double denom = (q == 0.0) ? 1e-300 : q;
    q = d[i] - x - e[i - 1] * e[i - 1] / denom;
    if (q < 0) ++count;
  }
  return count;
}

double hypot2(double a, double b) { return std::hypot(a, b); }

// implicit-shift QL on a symmetric tridiagonal, accumulating rotations into z
// (n x n, column-major; pass identity for eigenvectors)
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
  e.push_back(0.0);
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 50) throw std::runtime_error("tql2: too many iterations");
        double g = (d[l + 1] - d[l]) / (2 * e[l]);
        double r = hypot2(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1, c = 1, p = 0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i], b = c * e[i];
          r = hypot2(f, g);
          e[i + 1] = r;
          if (r == 0) {
            d[i + 1] -= p;
            e[m] = 0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[(i + 1) * n + k];
            z[(i + 1) * n + k] = s * z[i * n + k] + c * f;
            z[i * n + k] = c * z[i * n + k] - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0;
      }
    } while (m != l);
  }
  e.pop_back();

  // sort ascending, carrying columns
  for (int i = 0; i < n - 1; ++i) {
    int k = i;
    double p = d[i];
    for (int j = i + 1; j < n; ++j)
      if (d[j] < p) {
        k = j;
        p = d[j];
      }
    if (k != i) {
      std::swap(d[k], d[i]);
      for (int j = 0; j < n; ++j) std::swap(z[i * n + j], z[k * n + j]);
    }
  }
}

}  // namespace

std::vector<double> DiscreteOperator::apply_sym(const std::vector<double>& z) const {
  const int n = N - 1;
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double v = diag[i] * z[i];
    if (i > 0) v += off[i - 1] * z[i - 1];
    if (i + 1 < n) v += off[i] * z[i + 1];
    out[i] = v;
  }
  return out;
}

std::vector<double> DiscreteOperator::apply(const std::vector<double>& u) const {
  const int n = N - 1;
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = sqrtw[i] * u[i];
  z = apply_sym(z);
  for (int i = 0; i < n; ++i) z[i] /= sqrtw[i];
  return z;
}

double DiscreteOperator::inner_w(const std::vector<double>& u, const std::vector<double>& v) const {
  double acc = 0;
  for (int i = 0; i < N - 1; ++i) acc += w[i] * u[i] * v[i] * h;
  return acc;
}

DiscreteOperator discretize(const SLProblem& prob, const std::vector<double>& potential, int N) {
  if (N < 16) throw PreconditionViolation("discretize: N too small");
  if (prob.b_infinite) throw PreconditionViolation("discretize: needs a finite interval");
  if (!potential.empty() && static_cast<int>(potential.size()) != N - 1)
    throw PreconditionViolation("discretize: potential must have N-1 interior samples");

  DiscreteOperator op;
  op.N = N;
  op.a = prob.a;
  op.h = (prob.b - prob.a) / N;
  const int n = N - 1;
  op.rho.resize(n);
  op.w.resize(n);
  op.sqrtw.resize(n);
  op.diag.resize(n);
  op.off.resize(n - 1);

  std::vector<double> phalf(N);  // p at cell midpoints i+1/2, i = 0..N-1
  for (int i = 0; i < N; ++i) phalf[i] = prob.p(prob.a + (i + 0.5) * op.h);

  for (int i = 0; i < n; ++i) {
    const double x = prob.a + (i + 1) * op.h;
    op.rho[i] = x;
    op.w[i] = prob.w(x);
    if (!(op.w[i] > 0) || !std::isfinite(op.w[i]))
      throw PreconditionViolation("discretize: weight not positive and finite at a node");
    op.sqrtw[i] = std::sqrt(op.w[i]);
    double q = prob.q(x);
    if (!potential.empty()) q += potential[i] * op.w[i];
    else if (prob.potential) q += prob.potential(x) * op.w[i];
    op.diag[i] = (phalf[i] + phalf[i + 1]) / (op.h * op.h * op.w[i]) + q / op.w[i];
  }
  for (int i = 0; i + 1 < n; ++i)
    op.off[i] = -phalf[i + 1] / (op.h * op.h * op.sqrtw[i] * op.sqrtw[i + 1]);
  return op;
}

int count_below(const DiscreteOperator& op, double x) {
  return sturm_count(op.diag, op.off, x);
}

std::vector<double> eigen_negative(const DiscreteOperator& op) {
  const int k = count_below(op, 0.0);
  std::vector<double> out;
  if (k == 0) return out;
  double lo, hi;
  gershgorin(op.diag, op.off, lo, hi);
  for (int j = 0; j < k; ++j) {
    // j-th eigenvalue: bisection on the count
    double a = lo, b = 0.0;
    for (int it = 0; it < 200 && b - a > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      if (count_below(op, mid) >= j + 1) b = mid; else a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

const EigenDecomp& eigen_full(const DiscreteOperator& op) {
  if (op.decomp) return *op.decomp;
  const int n = op.N - 1;
  auto dec = std::make_shared<EigenDecomp>();
  dec->n = n;
  dec->lam = op.diag;
  std::vector<double> e = op.off;
  dec->vec.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) dec->vec[i * n + i] = 1.0;
  tql2(dec->lam, e, dec->vec, n);
  op.decomp = dec;
  return *op.decomp;
}

WaveState evolve_functional_calculus(const DiscreteOperator& op, const std::vector<double>& u0,
                                     const std::vector<double>& u1, double t) {
  const int n = op.N - 1;
  if (static_cast<int>(u0.size()) != n || static_cast<int>(u1.size()) != n)
    throw PreconditionViolation("evolve_functional_calculus: data size mismatch");
  const EigenDecomp& ed = eigen_full(op);

  double scale = 0;
  for (double l : ed.lam) scale = std::max(scale, std::abs(l));
  if (ed.lam[0] < -1e-10 * scale)
    throw NotNonnegative("evolve_functional_calculus: operator has negative spectrum",
                         ed.lam[0]);

  std::vector<double> z0(n), z1(n), c0(n), c1(n);
  for (int i = 0; i < n; ++i) {
    z0[i] = op.sqrtw[i] * u0[i];
    z1[i] = op.sqrtw[i] * u1[i];
  }
  for (int j = 0; j < n; ++j) {
    double a0 = 0, a1 = 0;
    for (int i = 0; i < n; ++i) {
      a0 += ed.at(i, j) * z0[i];
      a1 += ed.at(i, j) * z1[i];
    }
    c0[j] = a0;
    c1[j] = a1;
  }

  WaveState ws;
  ws.t = t;
  ws.u.assign(n, 0.0);
  ws.ut.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const double lam = std::max(ed.lam[j], 0.0);
    const double l = std::sqrt(lam);
    const double ct = std::cos(t * l);
    const double ft = l > 0 ? std::sin(t * l) / l : t;
    const double dft = ct;                       // d/dt of f_t
    const double dct = l > 0 ? -l * std::sin(t * l) : 0.0;
    const double au = ct * c0[j] + ft * c1[j];
    const double av = dct * c0[j] + dft * c1[j];
    for (int i = 0; i < n; ++i) {
      ws.u[i] += ed.at(i, j) * au;
      ws.ut[i] += ed.at(i, j) * av;
    }
  }
  for (int i = 0; i < n; ++i) {
    ws.u[i] /= op.sqrtw[i];
    ws.ut[i] /= op.sqrtw[i];
  }
  return ws;
}

double discrete_wave_energy(const DiscreteOperator& op, const std::vector<double>& u,
                            const std::vector<double>& v) {
  std::vector<double> lu = op.apply(u);
  return op.inner_w(lu, u) + op.inner_w(v, v);
}

}  // namespace slwm
