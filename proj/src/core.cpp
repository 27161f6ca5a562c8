#include "slwm/core.hpp"

#include <algorithm>
#include <cmath>

#include "slwm/problem.hpp"

namespace slwm {

namespace {

constexpr double kNodes[5] = {-0.90617984593866399, -0.53846931010568309, 0.0,
                              0.53846931010568309, 0.90617984593866399};
constexpr double kWeights[5] = {0.23692688505618909, 0.47862867049936647, 0.56888888888888889,
                                0.47862867049936647, 0.23692688505618909};

void check_same_point(double xu, double xv, const char* who) {
  if (std::abs(xu - xv) > 1e-12 * (1.0 + std::abs(xu)))
    throw PreconditionViolation(std::string(who) + ": evaluation points differ");
}

cplx wronskian(const BoundaryData& u, const BoundaryData& v) {
  return u.u * v.pu - u.pu * v.u;
}

// Hermite cubic on one cell of C^1 data.
struct Cell {
  double x0, h;
  cplx u0, u1, d0, d1;

  cplx value(double x) const {
    const double t = (x - x0) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * u0 + h * h10 * d0 + h01 * u1 + h * h11 * d1;
  }
  cplx deriv(double x) const {
    const double t = (x - x0) / h;
    return 6 * t * (t - 1) / h * (u0 - u1) + (1 - t) * (1 - 3 * t) * d0 + t * (3 * t - 2) * d1;
  }
  cplx second(double x) const {
    const double t = (x - x0) / h;
    return 6 * (2 * t - 1) / (h * h) * (u0 - u1) + ((6 * t - 4) * d0 + (6 * t - 2) * d1) / h;
  }
};

Cell cell_of(const C1Samples& s, std::size_t i) {
  return Cell{s.x[i], s.x[i + 1] - s.x[i], s.u[i], s.u[i + 1], s.du[i], s.du[i + 1]};
}

void check_samples(const C1Samples& s, const char* who) {
  if (s.x.size() < 2 || s.u.size() != s.x.size() || s.du.size() != s.x.size())
    throw PreconditionViolation(std::string(who) + ": malformed samples");
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i)
    if (!(s.x[i + 1] > s.x[i]))
      throw PreconditionViolation(std::string(who) + ": grid not increasing");
}

void check_common_grid(const C1Samples& u, const C1Samples& v, const char* who) {
  if (u.x.size() != v.x.size())
    throw PreconditionViolation(std::string(who) + ": grids differ");
  for (std::size_t i = 0; i < u.x.size(); ++i)
    if (u.x[i] != v.x[i]) throw PreconditionViolation(std::string(who) + ": grids differ");
}

cplx gl5_cell(const std::function<cplx(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx acc = 0;
  for (int i = 0; i < 5; ++i) acc += kWeights[i] * f(mid + half * kNodes[i]);
  return acc * half;
}

cplx adaptive_cell(const std::function<cplx(double)>& f, double a, double b, double tol,
                   int depth) {
  const cplx whole = gl5_cell(f, a, b);
  const double m = 0.5 * (a + b);
  const cplx split = gl5_cell(f, a, m) + gl5_cell(f, m, b);
  if (std::abs(whole - split) <= tol || depth <= 0) return split;
  return adaptive_cell(f, a, m, 0.5 * tol, depth - 1) +
         adaptive_cell(f, m, b, 0.5 * tol, depth - 1);
}

double max_abs(const std::vector<cplx>& v) {
  double m = 0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double simpson_uniform(const std::vector<double>& s, double h) {
  // composite Simpson; a trailing odd interval gets the 3/8 rule
  const std::size_t n = s.size();
  double acc = 0;
  std::size_t stop = (n % 2 == 1) ? n - 1 : n - 4;
  for (std::size_t i = 0; i + 2 <= stop; i += 2) acc += h / 3 * (s[i] + 4 * s[i + 1] + s[i + 2]);
  if (n % 2 == 0) acc += 3 * h / 8 * (s[n - 4] + 3 * s[n - 3] + 3 * s[n - 2] + s[n - 1]);
  return acc;
}

}  // namespace

cplx lagrange_bracket(const BoundaryData& u, const BoundaryData& v) {
  check_same_point(u.x, v.x, "lagrange_bracket");
  return u.u * std::conj(v.pu) - u.pu * std::conj(v.u);
}

cplx plucker_residual(const BoundaryData& b1, const BoundaryData& b2, const BoundaryData& b3,
                      const BoundaryData& b4) {
  check_same_point(b1.x, b2.x, "plucker_residual");
  check_same_point(b1.x, b3.x, "plucker_residual");
  check_same_point(b1.x, b4.x, "plucker_residual");
  return wronskian(b1, b2) * wronskian(b3, b4) + wronskian(b1, b3) * wronskian(b4, b2) +
         wronskian(b1, b4) * wronskian(b2, b3);
}

double integrate_gl5(const std::function<double(double)>& f, double a, double b, int cells) {
  if (cells < 1) throw PreconditionViolation("integrate_gl5: cells < 1");
  const double h = (b - a) / cells;
  double acc = 0;
  for (int c = 0; c < cells; ++c) {
    const double mid = a + (c + 0.5) * h, half = 0.5 * h;
    for (int i = 0; i < 5; ++i) acc += kWeights[i] * f(mid + half * kNodes[i]);
  }
  return acc * 0.5 * h;
}

cplx integrate_gl5(const std::function<cplx(double)>& f, double a, double b, int cells) {
  if (cells < 1) throw PreconditionViolation("integrate_gl5: cells < 1");
  const double h = (b - a) / cells;
  cplx acc = 0;
  for (int c = 0; c < cells; ++c) {
    const double mid = a + (c + 0.5) * h, half = 0.5 * h;
    for (int i = 0; i < 5; ++i) acc += kWeights[i] * f(mid + half * kNodes[i]);
  }
  return acc * 0.5 * h;
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
  auto fc = [&](double x) { return cplx(f(x), 0.0); };
  const double rough = std::abs(gl5_cell(fc, a, b)) + 1e-300;
  return adaptive_cell(fc, a, b, rel_tol * rough, max_depth).real();
}

C1Samples sample_c1(const std::function<cplx(double)>& u, const std::function<cplx(double)>& du,
                    const std::vector<double>& grid) {
  C1Samples s;
  s.x = grid;
  s.u.reserve(grid.size());
  s.du.reserve(grid.size());
  for (double x : grid) {
    s.u.push_back(u(x));
    s.du.push_back(du(x));
  }
  return s;
}

cplx weighted_inner(const SLProblem& prob, const C1Samples& u, const C1Samples& v) {
  check_samples(u, "weighted_inner");
  check_samples(v, "weighted_inner");
  check_common_grid(u, v, "weighted_inner");
  for (double x : u.x)
    if (!std::isfinite(prob.w(x)))
      throw PreconditionViolation("weighted_inner: singular weight at a grid node");

  // rough pass to set the absolute splitting budget
  cplx rough = 0;
  std::vector<cplx> cellvals(u.x.size() - 1);
  for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
    Cell cu = cell_of(u, i), cv = cell_of(v, i);
    auto f = [&](double x) { return cu.value(x) * std::conj(cv.value(x)) * prob.w(x); };
    cellvals[i] = gl5_cell(f, u.x[i], u.x[i + 1]);
    rough += cplx(std::abs(cellvals[i].real()), std::abs(cellvals[i].imag()));
  }
  const double scale = std::abs(rough) + 1e-300;

  cplx acc = 0;
  for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
    Cell cu = cell_of(u, i), cv = cell_of(v, i);
    auto f = [&](double x) { return cu.value(x) * std::conj(cv.value(x)) * prob.w(x); };
    const double tol = 1e-12 * std::max(scale * (u.x[i + 1] - u.x[i]) / (u.x.back() - u.x.front()),
                                        std::abs(cellvals[i]));
    acc += adaptive_cell(f, u.x[i], u.x[i + 1], tol, 30);
  }
  return acc;
}

double weighted_norm(const SLProblem& prob, const C1Samples& u) {
  return std::sqrt(std::max(0.0, weighted_inner(prob, u, u).real()));
}

double greens_residual(const SLProblem& prob, const C1Samples& u, const C1Samples& v, double c,
                       double d) {
  if (!(c < d)) throw PreconditionViolation("greens_residual: need c < d");
  check_samples(u, "greens_residual");
  check_common_grid(u, v, "greens_residual");

  auto node_at = [&](double xq) -> std::size_t {
    for (std::size_t i = 0; i < u.x.size(); ++i)
      if (std::abs(u.x[i] - xq) <= 1e-9 * (1 + std::abs(xq))) return i;
    throw PreconditionViolation("greens_residual: c and d must be grid nodes");
  };
  const std::size_t ic = node_at(c), id = node_at(d);

  auto alpha_of = [&](const Cell& cell, double x) {
    cplx au = (-(prob.p(x) * cell.second(x) + prob.dp(x) * cell.deriv(x)) +
               prob.q(x) * cell.value(x)) /
              prob.w(x);
    if (prob.potential) au += prob.potential(x) * cell.value(x);
    return au;
  };

  cplx integral = 0;
  for (std::size_t i = ic; i < id; ++i) {
    Cell cu = cell_of(u, i), cv = cell_of(v, i);
    auto f = [&](double x) {
      return (alpha_of(cu, x) * std::conj(cv.value(x)) -
              cu.value(x) * std::conj(alpha_of(cv, x))) *
             prob.w(x);
    };
    integral += gl5_cell(f, u.x[i], u.x[i + 1]);
  }

  auto bracket_at = [&](std::size_t i) {
    const double px = prob.p(u.x[i]);
    return u.u[i] * std::conj(px * v.du[i]) - px * u.du[i] * std::conj(v.u[i]);
  };
  return std::abs(integral - (bracket_at(id) - bracket_at(ic)));
}

double quadratic_form(const SLProblem& prob, const C1Samples& u) {
  check_samples(u, "quadratic_form");
  const double uscale = max_abs(u.u) + max_abs(u.du);
  if (std::abs(u.u.front()) + std::abs(u.du.front()) > 1e-10 * uscale ||
      std::abs(u.u.back()) + std::abs(u.du.back()) > 1e-10 * uscale)
    throw PreconditionViolation("quadratic_form: support touches an endpoint");

  double acc = 0;
  for (std::size_t i = 0; i + 1 < u.x.size(); ++i) {
    Cell cu = cell_of(u, i);
    auto f = [&](double x) {
      const double au = std::norm(cu.value(x));
      const double adu = std::norm(cu.deriv(x));
      double val = prob.p(x) * adu + prob.q(x) * au;
      if (prob.potential) val += prob.potential(x) * prob.w(x) * au;
      return cplx(val, 0.0);
    };
    acc += gl5_cell(f, u.x[i], u.x[i + 1]).real();
  }
  return acc;
}

double energy(const std::vector<double>& psi, const std::vector<double>& psi_t,
              const std::vector<double>& psi_r, const std::vector<double>& r) {
  const std::size_t n = r.size();
  if (n < 3 || psi.size() != n || psi_t.size() != n || psi_r.size() != n)
    throw PreconditionViolation("energy: malformed samples");
  double pmax = 0;
  for (double v : psi) pmax = std::max(pmax, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    if (r[i] == 0.0 && std::abs(psi[i]) > 1e-12 * (1 + pmax))
      throw PreconditionViolation("energy: psi(0) != 0 with r=0 in the grid");

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double si = std::sin(psi[i]);
    s[i] = (psi_t[i] * psi_t[i] + psi_r[i] * psi_r[i]) * r[i] * r[i] + 2 * si * si;
  }

  const double h = r[1] - r[0];
  bool uniform = true;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs(r[i + 1] - r[i] - h) > 1e-9 * h) { uniform = false; break; }

  if (uniform) return simpson_uniform(s, h);
  double acc = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) acc += 0.5 * (s[i] + s[i + 1]) * (r[i + 1] - r[i]);
  return acc;
}

HardyReport hardy_check(const C1Samples& s) {
  check_samples(s, "hardy_check");
  const double uscale = max_abs(s.u) + 1e-300;
  if (std::abs(s.u.front()) > 1e-10 * uscale)
    throw PreconditionViolation("hardy_check: u(a) != 0");

  const double a = s.x.front();
  HardyReport rep;
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
    Cell c = cell_of(s, i);
    auto fl = [&](double x) {
      const double d = x - a;
      return cplx(std::norm(c.value(x)) / (d * d), 0.0);
    };
    auto fr = [&](double x) { return cplx(std::norm(c.deriv(x)), 0.0); };
    rep.lhs += gl5_cell(fl, s.x[i], s.x[i + 1]).real();
    rep.rhs += 4 * gl5_cell(fr, s.x[i], s.x[i + 1]).real();
  }
  return rep;
}

}  // namespace slwm
