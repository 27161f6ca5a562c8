#include "slwm/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace slwm {

namespace {

struct VSide {
  Trajectory<2> traj;
  double v = 0, dv = 0;  // at rho = 1/2
};

// v'' + (2/rho - 2(1+mu) rho/(1-rho^2)) v' - (2cos(2f)/(rho^2(1-rho^2)) + (1+mu)(2+mu)/(1-rho^2)) v = 0
std::array<double, 2> v_rhs(const Profile& prof, double mu, double rho,
                            const std::array<double, 2>& y) {
  const double om = 1 - rho * rho;
  double f, df;
  prof.eval(rho, f, df);
  const double P = 2 / rho - 2 * (1 + mu) * rho / om;
  const double Q = -(2 * std::cos(2 * f) / (rho * rho * om) + (1 + mu) * (2 + mu) / om);
  return {y[1], -P * y[1] - Q * y[0]};
}

VSide launch_left_v(const Profile& prof, double mu, double eps, const OdeOptions& opt) {
  const double b = prof.slope0;
  const double c2 = ((mu + 2) * (mu + 3) - 4 * b * b) / 10;
  const double c4 = (40 * b * b * b * b - 8 * b * b * mu * mu - 56 * b * b * mu - 120 * b * b +
                     mu * mu * mu * mu + 14 * mu * mu * mu + 71 * mu * mu + 154 * mu + 120) /
                    280;
  const std::array<double, 2> y0 = {eps + c2 * eps * eps * eps + c4 * std::pow(eps, 5),
                                    1 + 3 * c2 * eps * eps + 5 * c4 * std::pow(eps, 4)};
  auto rhs = [&](double rho, const std::array<double, 2>& y) { return v_rhs(prof, mu, rho, y); };
  VSide out;
  out.traj = integrate<2>(rhs, eps, y0, 0.5, opt);
  out.v = out.traj.y.back()[0];
  out.dv = out.traj.y.back()[1];
  return out;
}

VSide launch_right_v(const Profile& prof, double mu, double eps, const OdeOptions& opt) {
  const double c1 = mu * (mu + 3) / (2 * (mu + 1));
  const double c2 = (mu * mu * mu * mu + 8 * mu * mu * mu + 21 * mu * mu + 10 * mu - 8) /
                    (8 * (mu + 1) * (mu + 2));
  const std::array<double, 2> y0 = {1 + c1 * eps + c2 * eps * eps, -c1 - 2 * c2 * eps};
  auto rhs = [&](double rho, const std::array<double, 2>& y) { return v_rhs(prof, mu, rho, y); };
  VSide out;
  out.traj = integrate<2>(rhs, 1 - eps, y0, 0.5, opt);
  out.v = out.traj.y.back()[0];
  out.dv = out.traj.y.back()[1];
  return out;
}

void trimmed_offsets(const Profile& prof, double mu, const MatchOptions& opt, double& el,
                     double& er) {
  el = std::min(opt.eps_left, 0.02 / std::max({prof.slope0, mu, 1.0}));
  er = std::min(opt.eps_right, 0.01 / std::max(mu, 1.0));
}

}  // namespace

double matching_fn(const Profile& prof, double mu, const MatchOptions& opt) {
  if (!(mu > 0)) throw PreconditionViolation("matching_fn: mu must be positive");
  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  double el, er;
  trimmed_offsets(prof, mu, opt, el, er);
  VSide L = launch_left_v(prof, mu, el, oo);
  VSide R = launch_right_v(prof, mu, er, oo);
  return L.v * R.dv - L.dv * R.v;
}

EigenResult find_eigenvalues(const Profile& prof, double mu_max, double mu_min, double ratio,
                             double tol, int jobs, bool expect_n) {
  if (!(mu_min > 0) || !(mu_max > mu_min) || !(ratio > 1))
    throw PreconditionViolation("find_eigenvalues: bad scan parameters");

  std::vector<double> mus;
  for (double mu = mu_min; mu < mu_max; mu *= ratio) mus.push_back(mu);
  mus.push_back(mu_max);

  std::vector<double> vals(mus.size());
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < mus.size(); ++i) vals[i] = matching_fn(prof, mus[i]);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < mus.size(); i += jobs)
          vals[i] = matching_fn(prof, mus[i]);
      });
    for (auto& th : pool) th.join();
  }

  EigenResult res;
  res.n = prof.n;
  res.mu_min = mu_min;
  res.mu_max = mu_max;
  res.ratio = ratio;
  res.method = "wronskian shooting, geometric scan + bisection";

  for (std::size_t i = 0; i + 1 < mus.size(); ++i) {
    if (!((vals[i] < 0) != (vals[i + 1] < 0))) continue;
    double lo = mus[i], hi = mus[i + 1];
    double flo = vals[i];
    while (hi - lo > tol * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // tol = 0 means bisect to the last bit
      const double fm = matching_fn(prof, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    EigenvalueHit hit;
    hit.bracket_lo = mus[i];
    hit.bracket_hi = mus[i + 1];
    hit.mu = 0.5 * (lo + hi);
    hit.lambda = -hit.mu * hit.mu;
    hit.matching_residual = std::abs(matching_fn(prof, hit.mu));
    res.eigenvalues.push_back(hit);
  }

  if (expect_n && static_cast<int>(res.eigenvalues.size()) != prof.n) {
    CountMismatch err("find_eigenvalues: expected " + std::to_string(prof.n) + " roots, found " +
                          std::to_string(res.eigenvalues.size()) + " in [" +
                          std::to_string(mu_min) + ", " + std::to_string(mu_max) + "]",
                      prof.n, static_cast<int>(res.eigenvalues.size()));
    err.scan_mu = mus;
    err.scan_val = vals;
    throw err;
  }
  return res;
}

FnSamples eigenfunction(const Profile& prof, double mu, int samples, const MatchOptions& opt) {
  if (samples < 8) throw PreconditionViolation("eigenfunction: too few samples");
  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  double el, er;
  trimmed_offsets(prof, mu, opt, el, er);
  VSide L = launch_left_v(prof, mu, el, oo);
  VSide R = launch_right_v(prof, mu, er, oo);

  // At the upper eigenvalues the one-sided solutions pass through exponentially
  // large magnitudes, so W at 1/2 sweeps a full scale swing within ~1 ulp of mu
  // and the pointwise ratio saturates at O(1) even for a perfectly located
  // root. Accept on a clean cancellation, otherwise require a sign change of
  // the matching function inside mu*(1 +/- 1e-6).
  const double scale = std::abs(L.v * R.dv) + std::abs(L.dv * R.v) + 1e-300;
  const double wrel = std::abs(L.v * R.dv - L.dv * R.v) / scale;
  if (wrel > 1e-6) {
    const double h = 1e-6 * mu;
    const double wlo = matching_fn(prof, mu - h, opt);
    const double whi = matching_fn(prof, mu + h, opt);
    if ((wlo < 0) == (whi < 0))
      throw PreconditionViolation("eigenfunction: mu is not an eigenvalue (|W|/scale = " +
                                  std::to_string(wrel) + ", no nearby sign change)");
  }

  auto u_of = [&](const Trajectory<2>& tr, double rho, double& u, double& du) {
    auto y = tr.eval(rho);
    const double om = 1 - rho * rho;
    const double fac = std::pow(om, 0.5 * (1 + mu));
    u = fac * y[0];
    du = fac * (y[1] - (1 + mu) * rho / om * y[0]);
  };

  double ul, dul, ur, dur;
  u_of(L.traj, 0.5, ul, dul);
  u_of(R.traj, 0.5, ur, dur);
  const double kappa = ul / ur;

  FnSamples fs;
  fs.rho.resize(samples);
  fs.u.resize(samples);
  fs.du.resize(samples);
  const double lo = el, hi = 1 - er;
  for (int i = 0; i < samples; ++i) {
    const double rho = lo + (hi - lo) * i / (samples - 1.0);
    fs.rho[i] = rho;
    double u, du;
    if (rho <= 0.5) {
      u_of(L.traj, rho, u, du);
    } else {
      u_of(R.traj, rho, u, du);
      u *= kappa;
      du *= kappa;
    }
    fs.u[i] = u;
    fs.du[i] = du;
  }

  double m = 0;
  for (double u : fs.u) m = std::max(m, std::abs(u));
  const double sign = fs.u.front() >= 0 ? 1.0 : -1.0;
  for (int i = 0; i < samples; ++i) {
    fs.u[i] *= sign / m;
    fs.du[i] *= sign / m;
  }
  // Count sign changes between samples clearly above the tail floor: the glued
  // deep states carry an O(1e-4) junction artifact where both one-sided
  // solutions are exponentially small, and a genuine nodal domain always
  // reaches O(1) of the sup.
  int last = 1;  // front sample is normalized non-negative
  for (int i = 1; i + 1 < samples; ++i) {
    if (std::abs(fs.u[i]) < 1e-3) continue;
    const int s = fs.u[i] > 0 ? 1 : -1;
    if (s != last) ++fs.interior_zeros;
    last = s;
  }
  return fs;
}

}  // namespace slwm
