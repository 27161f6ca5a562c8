#include "doctest.h"

#include <cmath>

#include "slwm/frobenius.hpp"
#include "slwm/odeint.hpp"
#include "slwm/problem.hpp"
#include "slwm/wavemaps.hpp"

using namespace slwm;

namespace {

double indicial_residual(const LocalExpansion& ex, cplx s) {
  cplx p0 = ex.pcoef.empty() ? cplx(0) : ex.pcoef[0];
  cplx q0 = ex.qcoef.empty() ? cplx(0) : ex.qcoef[0];
  return std::abs(s * (s - 1.0) + p0 * s + q0);
}

void check_pair(const LocalExpansion& ex, const IndicialPair& ip) {
  CHECK(std::abs(ip.s_minus) <= std::abs(ip.s_plus) + 1e-14);
  CHECK(indicial_residual(ex, ip.s_minus) <= 1e-12 * (1 + std::norm(ip.s_minus)));
  CHECK(indicial_residual(ex, ip.s_plus) <= 1e-12 * (1 + std::norm(ip.s_plus)));
}

}  // namespace

TEST_CASE("indices of the builtin expansions") {
  SLProblem wm = make_builtin("wavemap_A");

  // rho = 0: {1, -2}, a resonant pair
  auto exl = wm.left_expansion(cplx(0, 0), 12);
  auto ipl = indices(exl);
  check_pair(exl, ipl);
  CHECK(ipl.s_minus.real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ipl.s_plus.real() == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(ipl.resonance);

  // rho = 1 without the potential: q0 = lambda/4, pick lambda = 3 for roots {1.5, -0.5}
  auto exr = wm.right_expansion(cplx(3, 0), 12);
  auto ipr = indices(exr);
  check_pair(exr, ipr);
  CHECK(ipr.s_minus.real() == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(ipr.s_plus.real() == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(ipr.resonance);

  // complex spectral parameter: roots still satisfy the indicial polynomial
  auto exc = wm.right_expansion(cplx(0, 1), 12);
  check_pair(exc, indices(exc));

  // A_inf at rho = 0: s = (-1 +- i sqrt 7)/2, equal modulus, no resonance
  SLProblem ai = make_builtin("A_inf");
  auto exa = ai.left_expansion(cplx(0, 0), 12);
  auto ipa = indices(exa);
  check_pair(exa, ipa);
  const double rt7 = std::sqrt(7.0);
  CHECK(ipa.s_minus.real() == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(std::abs(ipa.s_minus.imag()) - rt7 / 2) <= 1e-13);
  CHECK(ipa.s_plus.real() == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(ipa.s_minus.imag() + ipa.s_plus.imag()) <= 1e-13);
  CHECK(!ipa.resonance);

  // ordinary points: {0, 1}
  SLProblem dl = make_builtin("dirichlet_laplacian");
  auto ipd = indices(dl.left_expansion(cplx(1, 0), 12));
  CHECK(std::abs(ipd.s_minus) <= 1e-13);
  CHECK(ipd.s_plus.real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ipd.resonance);

  // half-line problem at r = 0: {1, -2} again (same leading coefficients)
  SLProblem lw = make_builtin("linwm_halfline");
  auto ipw = indices(lw.left_expansion(cplx(0, 0), 12));
  CHECK(ipw.s_minus.real() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ipw.s_plus.real() == doctest::Approx(-2.0).epsilon(1e-13));
}

TEST_CASE("A_n indices at rho = 1 carry the spectral parameter") {
  // with the potential folded in, q0 = (1+lambda)/4 and the indices are
  // (1 -+ sqrt(-lambda))/2; lambda = -9 gives {-1, 2}
  Profile f0 = shoot_profile(0);
  SLProblem a0 = make_builtin("A_0", &f0);
  auto ex = a0.right_expansion(cplx(-9, 0), 12);
  auto ip = indices(ex);
  check_pair(ex, ip);
  CHECK(ip.s_minus.real() == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(ip.s_plus.real() == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(ip.resonance);

  // index-1 series at rho = 0 has no quadratic term (even local structure)
  auto exl = a0.left_expansion(cplx(-9, 0), 12);
  auto sol = series_solution(exl, cplx(1, 0), 12);
  CHECK(std::abs(sol.c[1]) <= 1e-15);
  CHECK(std::abs(sol.c[2]) > 1e-6);
}

TEST_CASE("series recurrence reproduces closed forms") {
  // Dirichlet Laplacian at lambda = 1, index 1: the series is sin(t)
  SLProblem dl = make_builtin("dirichlet_laplacian");
  auto sol = series_solution(dl.left_expansion(cplx(1, 0), 14), cplx(1, 0), 14);
  CHECK(std::abs(sol.c[1]) <= 1e-15);
  CHECK(sol.c[2].real() == doctest::Approx(-1.0 / 6).epsilon(1e-13));
  CHECK(std::abs(sol.eval_local(0.3) - std::sin(0.3)) <= 1e-13);
  CHECK(std::abs(sol.deriv_local(0.3) - std::cos(0.3)) <= 1e-13);

  // wavemap equation at lambda = 0: u = rho exactly
  SLProblem wm = make_builtin("wavemap_A");
  auto sol0 = series_solution(wm.left_expansion(cplx(0, 0), 12), cplx(1, 0), 12);
  for (std::size_t k = 1; k < sol0.c.size(); ++k) CHECK(std::abs(sol0.c[k]) <= 1e-14);
  CHECK(std::abs(sol0.eval_local(0.4) - 0.4) <= 1e-14);
}

TEST_CASE("regularized matching equation at rho = 1: first correction") {
  // local data of v'' - P(1-t) v' + Q(1-t) v = 0 at the right endpoint for
  // mu = 3: t P = { 1+mu, -2-(1+mu)/2, ... }, t^2 Q = { 0, 1-(1+mu)(2+mu)/2 }.
  // The recurrence must give c1 = mu(mu+3)/(2(1+mu)), i.e. v'(1) = -2.25.
  const double mu = 3.0;
  LocalExpansion ex;
  ex.x0 = 1.0;
  ex.side = Side::right;
  ex.pcoef = {cplx(1 + mu, 0), cplx(-2 - (1 + mu) / 2, 0)};
  ex.qcoef = {cplx(0, 0), cplx(1 - (1 + mu) * (2 + mu) / 2, 0)};
  ex.w_exponent = -2.0;
  ex.radius = 1.0;
  ex.p_of_x = [](double) { return 1.0; };

  auto ip = indices(ex);
  CHECK(std::abs(ip.s_minus) <= 1e-13);
  CHECK(ip.s_plus.real() == doctest::Approx(-mu).epsilon(1e-13));

  auto sol = series_solution(ex, cplx(0, 0), 2);
  CHECK(sol.c[1].real() == doctest::Approx(mu * (mu + 3) / (2 * (1 + mu))).epsilon(1e-13));
  CHECK(sol.x_at(0.1) == doctest::Approx(0.9));
}

TEST_CASE("launch: truncation agreement, eps = 0, guards") {
  SLProblem wm = make_builtin("wavemap_A");
  auto ex = wm.left_expansion(cplx(-25, 0), 16);

  BoundaryData b12 = launch(ex, cplx(1, 0), 1e-4, 12);
  BoundaryData b16 = launch(ex, cplx(1, 0), 1e-4, 16);
  CHECK(std::abs(b12.u - b16.u) <= 1e-10 * std::abs(b16.u));
  CHECK(std::abs(b12.pu - b16.pu) <= 1e-10 * std::abs(b16.pu));
  CHECK(std::abs(b12.u - cplx(1e-4, 0)) <= 1e-6 * 1e-4);
  CHECK(b12.x == doctest::Approx(1e-4));

  // eps = 0 for index 1: u = 0, u' = 1
  auto sol = series_solution(ex, cplx(1, 0), 12);
  cplx u, du;
  launch_state(sol, 0.0, u, du);
  CHECK(std::abs(u) == 0.0);
  CHECK(std::abs(du - 1.0) <= 1e-15);

  // guards: offset beyond the radius heuristic, and an unmeetable budget
  CHECK_THROWS_AS(launch(ex, cplx(1, 0), 0.5), TruncationBudgetExceeded);
  CHECK_THROWS_AS(launch(ex, cplx(1, 0), 0.09, 12, 1e-30), TruncationBudgetExceeded);

  // asking for the smaller resonant index fails at the k that closes the gap
  try {
    series_solution(ex, cplx(-2, 0), 12);
    CHECK(false);
  } catch (const ResonantIndex& e) {
    CHECK(e.k == 3);
  }
}

TEST_CASE("launch then integrate agrees with the direct series at 2 eps") {
  SLProblem wm = make_builtin("wavemap_A");
  const cplx lambda(-25, 0);
  auto ex = wm.left_expansion(lambda, 12);
  auto sol = series_solution(ex, cplx(1, 0), 12);

  const double eps = 1e-3;
  cplx u0, du0;
  launch_state(sol, eps, u0, du0);

  auto rhs = [&](double r, const std::array<double, 2>& y) {
    const double w = r * r / ((1 - r * r) * (1 - r * r));
    return std::array<double, 2>{
        y[1], (2 * y[0] - lambda.real() * w * y[0] - 2 * r * y[1]) / (r * r)};
  };
  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-16;
  auto t = integrate<2>(rhs, eps, {u0.real(), du0.real()}, 2 * eps, opt);

  cplx u1, du1;
  launch_state(sol, 2 * eps, u1, du1);
  CHECK(std::abs(t.y.back()[0] - u1.real()) <= 1e-8 * std::abs(u1));
  CHECK(std::abs(t.y.back()[1] - du1.real()) <= 1e-8 * std::abs(du1));
}

TEST_CASE("series residual in the ODE drops at the truncation order") {
  SLProblem wm = make_builtin("wavemap_A");
  const double lambda = -25;

  auto residual_at = [&](const SeriesSolution& sol, double t) {
    // assemble u'' + P u' + Q u from the coefficient list directly
    cplx u = 0, up = 0, upp = 0;
    for (std::size_t k = 0; k < sol.c.size(); ++k) {
      cplx e = sol.s + static_cast<double>(k);
      double tp = std::pow(t, e.real());
      u += sol.c[k] * tp;
      up += sol.c[k] * e * tp / t;
      upp += sol.c[k] * e * (e - 1.0) * tp / (t * t);
    }
    const double w = t * t / ((1 - t * t) * (1 - t * t));
    const double P = 2 / t;
    const double Q = (lambda * w - 2) / (t * t);
    return std::abs(upp + P * up + Q * u);
  };

  for (int K : {12, 16}) {
    auto sol = series_solution(wm.left_expansion(cplx(lambda, 0), K), cplx(1, 0), K);
    double r2 = residual_at(sol, 0.2);
    double r1 = residual_at(sol, 0.1);
    CHECK(std::log2(r2 / r1) >= 9.0);
    CHECK(sol.truncation_estimate(0.2) > sol.truncation_estimate(0.1));
  }
}
