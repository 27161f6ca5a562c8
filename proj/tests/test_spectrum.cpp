#include "doctest.h"

#include <cmath>

#include "slwm/spectrum.hpp"
#include "slwm/wavemaps.hpp"

using namespace slwm;

TEST_CASE("one eigenvalue below the first excited profile") {
  Profile f1 = shoot_profile(1);
  EigenResult res = find_eigenvalues(f1, 10.0, 0.2, 1.02, 0.0, 2);
  REQUIRE(res.eigenvalues.size() == 1);
  const auto& hit = res.eigenvalues[0];

  CHECK(hit.mu == doctest::Approx(5.333625).epsilon(1e-3));
  CHECK(hit.mu == doctest::Approx(5.333625325467402).epsilon(1e-9));  // regression pin
  CHECK(hit.lambda == -hit.mu * hit.mu);
  CHECK(hit.bracket_lo <= hit.mu);
  CHECK(hit.mu <= hit.bracket_hi);
  CHECK(hit.lambda >= eigen_lower_bound(f1));

  // ground state: no interior zeros
  FnSamples u = eigenfunction(f1, hit.mu);
  CHECK(u.interior_zeros == 0);
  CHECK(u.rho.front() > 0.0);
  CHECK(u.rho.back() < 1.0);

  // u ~ rho at the left end
  const double q1 = std::abs(u.u[1]) / u.rho[1];
  const double q2 = std::abs(u.u[2]) / u.rho[2];
  CHECK(q1 == doctest::Approx(q2).epsilon(0.05));
}

TEST_CASE("two eigenvalues for n = 2 with the documented zero counts") {
  Profile f2 = shoot_profile(2);
  EigenResult res = find_eigenvalues(f2, 70.0, 0.2, 1.02, 0.0, 2);
  REQUIRE(res.eigenvalues.size() == 2);
  CHECK(res.eigenvalues[0].mu == doctest::Approx(5.304).epsilon(1e-2));
  CHECK(res.eigenvalues[1].mu == doctest::Approx(58.0701).epsilon(1e-2));
  CHECK(res.eigenvalues[0].mu == doctest::Approx(5.3041224875535065).epsilon(1e-9));
  CHECK(res.eigenvalues[1].mu == doctest::Approx(58.070129698077).epsilon(1e-9));
  CHECK(res.eigenvalues[0].mu < res.eigenvalues[1].mu);

  const double bound = eigen_lower_bound(f2);
  for (const auto& h : res.eigenvalues) CHECK(h.lambda >= bound);

  // oscillation ordering: the most negative lambda (largest mu) is nodeless
  CHECK(eigenfunction(f2, res.eigenvalues[0].mu).interior_zeros == 1);
  CHECK(eigenfunction(f2, res.eigenvalues[1].mu).interior_zeros == 0);
}

TEST_CASE("the ground profile has an empty point spectrum") {
  Profile f0 = shoot_profile(0);

  // no sign change anywhere on [0.5, 50]
  double first = matching_fn(f0, 0.5);
  CHECK(std::isfinite(first));
  for (double mu = 0.5; mu <= 50.0; mu *= 1.6) {
    const double w = matching_fn(f0, mu);
    CHECK(std::isfinite(w));
    CHECK((w < 0) == (first < 0));
  }

  EigenResult res = find_eigenvalues(f0, 50.0, 0.5, 1.05, 0.0, 2);
  CHECK(res.eigenvalues.empty());
  CHECK(res.method.find("bisection") != std::string::npos);
}

TEST_CASE("matching preconditions and count mismatch") {
  Profile f1 = shoot_profile(1);
  CHECK_THROWS_AS(matching_fn(f1, -1.0), PreconditionViolation);
  CHECK_THROWS_AS(matching_fn(f1, 0.0), PreconditionViolation);

  // a scan window that cannot contain the root reports the miscount with its trace
  try {
    find_eigenvalues(f1, 3.0, 0.2, 1.02, 0.0, 1);
    CHECK(false);
  } catch (const CountMismatch& e) {
    CHECK(e.expected == 1);
    CHECK(e.found == 0);
    CHECK(e.scan_mu.size() == e.scan_val.size());
    CHECK(e.scan_mu.size() > 10);
  }

  // off-eigenvalue reconstruction is refused
  CHECK_THROWS_AS(eigenfunction(f1, 3.0), PreconditionViolation);
}

TEST_CASE("eigenvalue is stable under halving the launch offsets") {
  Profile f1 = shoot_profile(1);

  auto bisect = [&](const MatchOptions& opt) {
    double lo = 5.2, hi = 5.45;
    double flo = matching_fn(f1, lo, opt);
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = matching_fn(f1, mid, opt);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  MatchOptions a;  // defaults
  MatchOptions b;
  b.eps_left = a.eps_left / 2;
  b.eps_right = a.eps_right / 2;
  const double mua = bisect(a), mub = bisect(b);
  CHECK(std::abs(mua - mub) <= 1e-8 * mua);
}

TEST_CASE("first column converges toward the limiting operator value") {
  const double mu_inf = 5.300866547273472;
  Profile f1 = shoot_profile(1);
  Profile f2 = shoot_profile(2);
  const double m1 = find_eigenvalues(f1, 10.0, 0.2, 1.02, 0.0, 2).eigenvalues[0].mu;
  const double m2 = find_eigenvalues(f2, 10.0, 0.2, 1.02, 0.0, 2, false).eigenvalues[0].mu;
  CHECK(std::abs(m2 - mu_inf) < std::abs(m1 - mu_inf));
}
