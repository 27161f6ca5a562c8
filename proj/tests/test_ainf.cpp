#include "doctest.h"

#include <cmath>
#include <random>

#include "slwm/ainf.hpp"

using namespace slwm;

TEST_CASE("gamma function: fixed points, reflection, poles") {
  CHECK(std::abs(complex_gamma(cplx(1, 0)) - cplx(1, 0)) <= 1e-13);
  CHECK(std::abs(complex_gamma(cplx(5, 0)) - cplx(24, 0)) <= 24 * 1e-13);
  CHECK(std::abs(complex_gamma(cplx(0.5, 0)) - cplx(std::sqrt(M_PI), 0)) <= 1e-13);
  CHECK(std::abs(complex_gamma(cplx(-0.5, 0)) - cplx(-2 * std::sqrt(M_PI), 0)) <= 1e-12);

  // |Gamma(i)|^2 = pi / sinh(pi)
  CHECK(std::abs(complex_gamma(cplx(0, 1))) ==
        doctest::Approx(std::sqrt(M_PI / std::sinh(M_PI))).epsilon(1e-13));

  // Gamma(z) Gamma(1-z) sin(pi z) = pi off the real axis
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dre(-4, 4), dim(0.1, 3);
  for (int it = 0; it < 200; ++it) {
    cplx z(dre(rng), dim(rng));
    cplx lhs = complex_gamma(z) * complex_gamma(1.0 - z) * std::sin(M_PI * z) / M_PI;
    CHECK(std::abs(lhs - 1.0) <= 1e-12);
  }

  CHECK_THROWS_AS(complex_gamma(cplx(0, 0)), PoleAtNonPositiveInteger);
  CHECK_THROWS_AS(complex_gamma(cplx(-1, 0)), PoleAtNonPositiveInteger);
  CHECK_THROWS_AS(complex_gamma(cplx(-5, 0)), PoleAtNonPositiveInteger);
}

TEST_CASE("hypergeometric parameters") {
  const double rt7 = std::sqrt(7.0);
  HypergeomParams p = ainf_params(3.0);
  CHECK(std::abs(p.a - cplx(7.0 / 4, rt7 / 4)) <= 1e-15);
  CHECK(std::abs(p.b - cplx(9.0 / 4, rt7 / 4)) <= 1e-15);
  CHECK(std::abs(p.c - cplx(1.0, rt7 / 2)) <= 1e-15);
  CHECK(std::abs(ainf_params(0.0).c - ainf_params(100.0).c) == 0.0);
}

TEST_CASE("connection coefficient is unimodular on the negative axis") {
  for (double lam : {0.0, -1.0, -25.0, -400.0, -384400.0}) {
    cplx m = connection_m(lam);
    CHECK(std::abs(std::abs(m) - 1.0) <= 1e-8);
  }

  // value at the anchor point
  cplx m0 = connection_m(0.0);
  CHECK(m0.real() == doctest::Approx(0.9976583991).epsilon(1e-8));
  CHECK(m0.imag() == doctest::Approx(0.06839384922).epsilon(1e-8));

  // continuity
  CHECK(std::abs(connection_m(-25.0) - connection_m(-25.0 - 1e-6)) <= 1e-4);

  CHECK_THROWS_AS(connection_m(1.0), PreconditionViolation);
}

TEST_CASE("phase record and the smallness assumption") {
  PhaseRecord r0 = ainf_phase(0.0);
  CHECK(r0.abs_m == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r0.delta == doctest::Approx(1.5365726853098243).epsilon(1e-10));
  CHECK(std::abs(r0.delta) < M_PI / 2);
}

TEST_CASE("limiting-operator eigenvalues by phase matching") {
  EigenResult res = find_ainf_eigenvalues(650.0);
  REQUIRE(res.eigenvalues.size() == 3);

  const double table[3] = {5.3009, 57.637, 619.61};
  const double frozen[3] = {5.300866547273472, 57.63735002093017, 619.6105086505413};
  for (int j = 0; j < 3; ++j) {
    CHECK(res.eigenvalues[j].mu == doctest::Approx(table[j]).epsilon(1e-3));
    CHECK(res.eigenvalues[j].mu == doctest::Approx(frozen[j]).epsilon(1e-9));
    CHECK(res.eigenvalues[j].lambda == -res.eigenvalues[j].mu * res.eigenvalues[j].mu);
  }
  CHECK(res.eigenvalues[0].mu < res.eigenvalues[1].mu);
  CHECK(res.eigenvalues[1].mu < res.eigenvalues[2].mu);
}

TEST_CASE("phase scan stays wrapped and finds two roots below 70") {
  std::vector<double> mu, dphase;
  ainf_phase_scan(70.0, 0.25, mu, dphase);
  REQUIRE(mu.size() == dphase.size());
  REQUIRE(mu.size() > 100);
  for (double d : dphase) CHECK(std::abs(d) <= M_PI + 1e-12);

  int roots = 0;
  for (std::size_t i = 1; i < mu.size(); ++i) {
    const double a = dphase[i - 1], b = dphase[i];
    if ((a < 0) != (b < 0) && std::abs(b - a) < M_PI) ++roots;
  }
  CHECK(roots == 2);
}

TEST_CASE("bracket form of the boundary condition") {
  BoundaryData u{1e-3, cplx(0.3, 0), cplx(0.7, 0)};
  CHECK(std::abs(boundary_condition_bracket(u, u)) == 0.0);

  BoundaryData v{1e-3, cplx(1.0, 0), cplx(2.0, 0)};
  CHECK(std::abs(boundary_condition_bracket(u, v) - cplx(0.3 * 2.0 - 0.7 * 1.0, 0)) <= 1e-15);

  BoundaryData w{2e-3, cplx(1.0, 0), cplx(2.0, 0)};
  CHECK_THROWS_AS(boundary_condition_bracket(u, w), PreconditionViolation);
}

TEST_CASE("shooting route confirms the Gamma route") {
  // at the first eigenvalue the normalized bracket collapses at both offsets
  const double mu1 = 5.300866547273472;
  const double b3 = ainf_bracket_at(mu1, 1e-3);
  const double b4 = ainf_bracket_at(mu1, 1e-4);
  CHECK(std::abs(b3) <= 1e-3);
  CHECK(std::abs(b4) <= 1e-3);

  // away from the spectrum it stays pinned away from zero
  CHECK(std::abs(ainf_bracket_at(10.0, 1e-3)) > 0.01);
  CHECK(std::abs(ainf_bracket_at(10.0, 1e-4)) > 0.01);

  // a bracket-based scan over (0, 60] sees exactly the two Gamma-route roots
  double prev = ainf_bracket_at(0.5, 1e-3);
  int flips = 0;
  for (double mu = 1.0; mu <= 60.0; mu += 0.5) {
    const double cur = ainf_bracket_at(mu, 1e-3);
    if ((cur < 0) != (prev < 0)) ++flips;
    prev = cur;
  }
  CHECK(flips == 2);
}
