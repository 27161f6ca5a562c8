#include "slwm/frobenius.hpp"

#include <cmath>

namespace slwm {

namespace {

cplx coef(const std::vector<cplx>& v, std::size_t k) { return k < v.size() ? v[k] : cplx(0); }

cplx indicial_poly(const LocalExpansion& ex, cplx s) {
  return s * (s - 1.0) + coef(ex.pcoef, 0) * s + coef(ex.qcoef, 0);
}

}  // namespace

IndicialPair indices(const LocalExpansion& ex) {
  if (ex.pcoef.empty() || ex.qcoef.empty())
    throw PreconditionViolation("indices: empty expansion");
  const cplx p0 = ex.pcoef[0], q0 = ex.qcoef[0];
  const cplx disc = std::sqrt((p0 - 1.0) * (p0 - 1.0) - 4.0 * q0);
  cplx s1 = 0.5 * ((1.0 - p0) + disc);
  cplx s2 = 0.5 * ((1.0 - p0) - disc);
  if (std::abs(s1) > std::abs(s2)) std::swap(s1, s2);
  IndicialPair out{s1, s2, false};
  const cplx gap = s2 - s1;
  out.resonance =
      std::abs(gap.imag()) <= 1e-9 && std::abs(gap.real() - std::round(gap.real())) <= 1e-9;
  return out;
}

SeriesSolution series_solution(const LocalExpansion& ex, cplx s, int K) {
  if (K < 1) throw PreconditionViolation("series_solution: K < 1");
  SeriesSolution sol{ex, s, {}};
  sol.c.assign(static_cast<std::size_t>(K) + 1, cplx(0));
  sol.c[0] = 1.0;
  const double scale = 1.0 + std::abs(coef(ex.pcoef, 0)) + std::abs(coef(ex.qcoef, 0));
  for (int k = 1; k <= K; ++k) {
    const cplx ind = indicial_poly(ex, s + cplx(k));
    if (std::abs(ind) <= 1e-12 * scale * (1.0 + std::norm(s + cplx(k))))
      throw ResonantIndex(k, "series_solution: resonant index k=" + std::to_string(k));
    cplx rhs = 0;
    for (int j = 0; j < k; ++j)
      rhs -= sol.c[j] * ((s + cplx(j)) * coef(ex.pcoef, k - j) + coef(ex.qcoef, k - j));
    sol.c[k] = rhs / ind;
  }
  return sol;
}

cplx SeriesSolution::eval_local(double t) const {
  if (t < 0) throw PreconditionViolation("eval_local: t < 0");
  if (t == 0.0) {
    if (s.real() > 0) return 0.0;
    if (s == cplx(0)) return c[0];
    throw PreconditionViolation("eval_local: t=0 with a non-positive index");
  }
  cplx poly = 0;
  for (std::size_t k = c.size(); k-- > 0;) poly = poly * t + c[k];
  return std::exp(s * std::log(t)) * poly;
}

cplx SeriesSolution::deriv_local(double t) const {
  if (t < 0) throw PreconditionViolation("deriv_local: t < 0");
  if (t == 0.0) {
    // only the k with s+k = 1 survives; Re(s) >= 1 keeps everything finite
    if (s == cplx(1)) return c[0];
    if (s.real() > 1) return 0.0;
    if (s == cplx(0)) return c.size() > 1 ? c[1] : cplx(0);
    throw PreconditionViolation("deriv_local: derivative singular at t=0");
  }
  cplx acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k] * (s + cplx(k));
  return std::exp((s - 1.0) * std::log(t)) * acc;
}

double SeriesSolution::truncation_estimate(double t) const {
  double last = std::abs(c.back()) * std::pow(t, static_cast<double>(c.size() - 1));
  cplx sum = 0;
  for (std::size_t k = c.size(); k-- > 0;) sum = sum * t + c[k];
  return last / std::max(std::abs(sum), 1e-300);
}

BoundaryData launch(const SeriesSolution& sol, double eps, double trunc_tol) {
  if (eps > 0 && sol.truncation_estimate(eps) > trunc_tol)
    throw TruncationBudgetExceeded("launch: truncated tail above budget at this offset");
  cplx u, du_dx;
  launch_state(sol, eps, u, du_dx);
  const double x = sol.x_at(eps);
  const double pfac = sol.ex.p_of_x ? sol.ex.p_of_x(x) : 1.0;
  return BoundaryData{x, u, pfac * du_dx};
}

BoundaryData launch(const LocalExpansion& ex, cplx s, double eps, int K, double trunc_tol) {
  return launch(series_solution(ex, s, K), eps, trunc_tol);
}

void launch_state(const SeriesSolution& sol, double eps, cplx& u, cplx& du_dx) {
  if (eps < 0) throw PreconditionViolation("launch_state: eps < 0");
  if (eps > 0.1 * sol.ex.radius)
    throw TruncationBudgetExceeded("launch: offset beyond a tenth of the expansion radius");
  u = sol.eval_local(eps);
  const cplx du_dt = sol.deriv_local(eps);
  du_dx = sol.ex.side == Side::left ? du_dt : -du_dt;
}

}  // namespace slwm
