#include "slwm/ainf.hpp"

#include <algorithm>
#include <cmath>

namespace slwm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt7 = 2.6457513110645905905;

// Lanczos, g = 7
constexpr double kLanczos[9] = {0.99999999999980993,     676.5203681218851,
                               -1259.1392167224028,     771.32342877765313,
                               -176.61502916214059,     12.507343278686905,
                               -0.13857109526572012,    9.9843695780195716e-6,
                               1.5056327351493116e-7};

cplx gamma_core(cplx z) {
  // Re z >= 0.5 here
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + cplx(i));
  const cplx t = z + 7.5;
  return std::sqrt(2 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double wrap_angle(double a) { return std::remainder(a, 2 * kPi); }

cplx lgamma_core(cplx z) {
  // Re z >= 0.5 here
  z -= 1.0;
  cplx x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + cplx(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// principal branch up to 2*pi*i jumps, which every caller wraps away
cplx lgamma_principal(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleAtNonPositiveInteger("gamma pole at z = " + std::to_string(z.real()));
  if (z.real() < 0.5)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - lgamma_core(1.0 - z);
  return lgamma_core(z);
}

}  // namespace

cplx complex_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
    throw PoleAtNonPositiveInteger("gamma pole at z = " + std::to_string(z.real()));
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return kPi / (std::sin(kPi * z) * gamma_core(1.0 - z));
  }
  return gamma_core(z);
}

HypergeomParams ainf_params(double mu) {
  HypergeomParams hp;
  hp.mu = mu;
  hp.a = cplx(1 + 2 * mu, kSqrt7) / 4.0;
  hp.b = cplx(3 + 2 * mu, kSqrt7) / 4.0;
  hp.c = cplx(1, kSqrt7 / 2);
  return hp;
}

cplx connection_m(double lambda) {
  if (lambda > 0) throw PreconditionViolation("connection_m: lambda must be <= 0");
  const double mu = std::sqrt(-lambda);
  const HypergeomParams hp = ainf_params(mu);
  // gamma overflows past Re z ~ 172, so combine in log space; |m| stays O(1)
  const cplx lm = lgamma_principal(hp.a + 1.0 - hp.c) + lgamma_principal(hp.b + 1.0 - hp.c) +
                  lgamma_principal(hp.c - 1.0) - lgamma_principal(hp.a) -
                  lgamma_principal(hp.b) - lgamma_principal(1.0 - hp.c);
  return std::exp(cplx(lm.real(), wrap_angle(lm.imag())));
}

PhaseRecord ainf_phase(double lambda) {
  PhaseRecord pr;
  pr.lambda = lambda;
  pr.m = connection_m(lambda);
  pr.abs_m = std::abs(pr.m);
  pr.delta = kPi / 2 - std::arg(pr.m) / 2;
  return pr;
}

void ainf_phase_scan(double mu_max, double step, std::vector<double>& mu,
                     std::vector<double>& dphase) {
  mu.clear();
  dphase.clear();
  const double arg0 = std::arg(connection_m(0.0));
  for (double m = step; m <= mu_max + 1e-12; m += step) {
    mu.push_back(m);
    dphase.push_back(wrap_angle(std::arg(connection_m(-m * m)) - arg0));
  }
}

EigenResult find_ainf_eigenvalues(double mu_max, double step, double tol) {
  const PhaseRecord at0 = ainf_phase(0.0);
  if (!(std::abs(at0.delta) < kPi / 2))
    throw std::runtime_error("find_ainf_eigenvalues: boundary phase outside (-pi/2, pi/2)");
  const double arg0 = std::arg(at0.m);
  auto dphi = [&](double mu) { return wrap_angle(std::arg(connection_m(-mu * mu)) - arg0); };

  EigenResult res;
  res.mu_min = step;
  res.mu_max = mu_max;
  res.ratio = 1.0;
  res.method = "connection-coefficient phase, arithmetic scan + bisection";

  double prev_mu = step, prev = dphi(step);
  for (double mu = 2 * step; mu <= mu_max + 1e-12; mu += step) {
    const double cur = dphi(mu);
    const bool sign_change = (prev < 0) != (cur < 0);
    const bool wrap_jump = std::abs(cur - prev) > kPi;
    if (sign_change && !wrap_jump) {
      if (!(std::abs(prev) < kPi / 2 && std::abs(cur) < kPi / 2))
        throw std::runtime_error("find_ainf_eigenvalues: bracket endpoints not in (-pi/2, pi/2)");
      double lo = prev_mu, hi = mu, flo = prev;
      while (hi - lo > tol * std::max(hi, 1.0)) {
        const double mid = 0.5 * (lo + hi);
        const double fm = dphi(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      EigenvalueHit hit;
      hit.bracket_lo = prev_mu;
      hit.bracket_hi = mu;
      hit.mu = 0.5 * (lo + hi);
      hit.lambda = -hit.mu * hit.mu;
      hit.matching_residual = std::abs(dphi(hit.mu));
      res.eigenvalues.push_back(hit);
    }
    prev_mu = mu;
    prev = cur;
  }
  res.n = static_cast<int>(res.eigenvalues.size());
  return res;
}

cplx boundary_condition_bracket(const BoundaryData& u, const BoundaryData& ref) {
  if (std::abs(u.x - ref.x) > 1e-12 * (1 + std::abs(u.x)))
    throw PreconditionViolation("boundary_condition_bracket: evaluation points differ");
  return u.u * ref.pu - u.pu * ref.u;
}

double ainf_bracket_at(double mu, double rho_off) {
  if (!(rho_off > 0 && rho_off < 0.5))
    throw PreconditionViolation("ainf_bracket_at: rho_off must be in (0, 0.5)");

  // integrate from the rho=1 side in the same (1-rho^2)^{-(1+mu)/2} gauge as the
  // profile spectra, with cos(2f) frozen at its rho=1 value -1
  auto shoot = [&](double m) {
    auto rhs = [m](double rho, const std::array<double, 2>& y) {
      const double om = 1 - rho * rho;
      const double P = 2 / rho - 2 * (1 + m) * rho / om;
      const double Q = -(-2 / (rho * rho * om) + (1 + m) * (2 + m) / om);
      return std::array<double, 2>{y[1], -P * y[1] - Q * y[0]};
    };
    const double eps = std::min(1e-4, 0.01 / std::max(m, 1.0));
    const double c1 = m * (m + 3) / (2 * (m + 1));
    const double c2 =
        (m * m * m * m + 8 * m * m * m + 21 * m * m + 10 * m - 8) / (8 * (m + 1) * (m + 2));
    const std::array<double, 2> y0 = {1 + c1 * eps + c2 * eps * eps, -c1 - 2 * c2 * eps};
    OdeOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-14;
    Trajectory<2> tr = integrate<2>(rhs, 1 - eps, y0, rho_off, opt);
    const double om = 1 - rho_off * rho_off;
    const double fac = std::pow(om, 0.5 * (1 + m));
    const double u = fac * tr.y.back()[0];
    const double du = fac * (tr.y.back()[1] - (1 + m) * rho_off / om * tr.y.back()[0]);
    return BoundaryData{rho_off, u, rho_off * rho_off * du};
  };

  const BoundaryData u = shoot(mu), ref = shoot(0.0);
  const cplx br = boundary_condition_bracket(u, ref);

  // normalize by the local oscillation amplitudes: phi = rho^{1/2} u is a pure
  // cosine in log rho with angular rate sqrt(7)/2
  auto amplitude = [&](const BoundaryData& bd) {
    const double up = bd.pu.real() / (rho_off * rho_off);
    const double phi = std::sqrt(rho_off) * bd.u.real();
    const double rphip = rho_off * (0.5 / std::sqrt(rho_off) * bd.u.real() +
                                    std::sqrt(rho_off) * up);
    return std::sqrt(phi * phi + (2 / kSqrt7) * (2 / kSqrt7) * rphip * rphip);
  };
  return br.real() / (0.5 * kSqrt7 * amplitude(u) * amplitude(ref));
}

}  // namespace slwm
