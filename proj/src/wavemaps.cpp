#include "slwm/wavemaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace slwm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// (b, s) shooting seeds: f ~ b rho at 0, f'(1) = s one-sided
constexpr double kSeedB[5] = {2.0, 21.75741418, 234.5014627, 2521.344492, 27102.82337};
constexpr double kSeedS[5] = {1.0, -0.3056644114, 0.09321627488, -0.02843138102, 0.008671842927};

double cubic_coef(double b) { return b / 5 - (2.0 / 15) * b * b * b; }

struct ShotHalf {
  Trajectory<2> traj;
  double f = 0, df = 0;  // at rho = 1/2, df in rho
};

ShotHalf shoot_left(double b, double alpha, double rho0, const OdeOptions& opt) {
  const double d = cubic_coef(b);
  const double x0 = std::log(alpha + rho0);
  const double xm = std::log(alpha + 0.5);
  const std::array<double, 2> y0 = {b * rho0 + d * rho0 * rho0 * rho0,
                                    (b + 3 * d * rho0 * rho0) * (alpha + rho0)};
  auto rhs = [alpha](double x, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], profile_rhs_log(x, y[0], y[1], alpha)};
  };
  ShotHalf out;
  out.traj = integrate<2>(rhs, x0, y0, xm, opt);
  out.f = out.traj.y.back()[0];
  out.df = out.traj.y.back()[1] / (alpha + 0.5);
  return out;
}

ShotHalf shoot_right(double s, double u0, const OdeOptions& opt) {
  const double rho1 = 1 - u0;
  const std::array<double, 2> y0 = {kPi / 2 - s * u0 - 0.5 * s * u0 * u0, s * (1 + u0)};
  auto rhs = [](double rho, const std::array<double, 2>& y) {
    return std::array<double, 2>{
        y[1], -2 / rho * y[1] + std::sin(2 * y[0]) / (rho * rho * (1 - rho * rho))};
  };
  ShotHalf out;
  out.traj = integrate<2>(rhs, rho1, y0, 0.5, opt);
  out.f = out.traj.y.back()[0];
  out.df = out.traj.y.back()[1];
  return out;
}

int crossings_on_trajectories(const Profile& prof) {
  const int M = 4000;
  int count = 0;
  double prev = prof.f_at(1e-9) - kPi / 2;
  for (int i = 1; i <= M; ++i) {
    const double rho = static_cast<double>(i) / M * (1 - 1e-6);
    const double v = prof.f_at(rho) - kPi / 2;
    if (prev != 0 && v != 0 && (prev < 0) != (v < 0)) ++count;
    if (v != 0) prev = v;
  }
  return count;
}

// crossing count of the left-shot solution alone, for the coarse scan
int scan_crossings(double b, double alpha, const OdeOptions& opt) {
  const double rho0 = std::min(1e-4, 1e-3 / std::max(b, 1.0));
  const double d = cubic_coef(b);
  const double x0 = std::log(alpha + rho0);
  const double xm = std::log(alpha + 0.98);
  const std::array<double, 2> y0 = {b * rho0 + d * rho0 * rho0 * rho0,
                                    (b + 3 * d * rho0 * rho0) * (alpha + rho0)};
  auto rhs = [alpha](double x, const std::array<double, 2>& y) {
    return std::array<double, 2>{y[1], profile_rhs_log(x, y[0], y[1], alpha)};
  };
  Trajectory<2> tr;
  try {
    tr = integrate<2>(rhs, x0, y0, xm, opt);
  } catch (const std::runtime_error&) {
    return -1;
  }
  int count = 0;
  for (std::size_t i = 1; i < tr.x.size(); ++i) {
    const double a = tr.y[i - 1][0] - kPi / 2, c = tr.y[i][0] - kPi / 2;
    if (a != 0 && c != 0 && (a < 0) != (c < 0)) ++count;
  }
  return count;
}

}  // namespace

double profile_rhs_log(double x, double f, double fp, double alpha) {
  const double rho = std::exp(x) - alpha;
  if (rho <= 0) throw std::domain_error("profile_rhs_log: x <= log(alpha)");
  const double ex = std::exp(x);
  return -((ex + alpha) / rho) * fp +
         ex * ex * std::sin(2 * f) / ((1 - rho * rho) * rho * rho);
}

void Profile::eval(double rho, double& f, double& df) const {
  if (rho < 0 || rho > 1) throw PreconditionViolation("Profile::eval: rho outside [0,1]");
  const double b = slope0, s = slope1, d = cubic_coef(b);
  if (rho <= rho_lo) {
    f = b * rho + d * rho * rho * rho;
    df = b + 3 * d * rho * rho;
    return;
  }
  if (rho >= rho_hi) {
    const double u = 1 - rho;
    f = kPi / 2 - s * u - 0.5 * s * u * u;
    df = s * (1 + u);
    return;
  }
  if (rho <= 0.5) {
    const double x = std::log(alpha + rho);
    auto y = left.eval(x);
    f = y[0];
    df = y[1] / (alpha + rho);
  } else {
    auto y = right.eval(rho);
    f = y[0];
    df = y[1];
  }
}

double Profile::f_at(double rho) const {
  double f, df;
  eval(rho, f, df);
  return f;
}

Profile shoot_profile(int n, double alpha, double tol) {
  if (n < 0 || n > 4) throw PreconditionViolation("shoot_profile: n must be in 0..4");
  if (!(alpha > 0)) throw PreconditionViolation("shoot_profile: alpha must be positive");

  OdeOptions opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;

  const double u0 = 1e-6;

  auto resid = [&](double b, double s, ShotHalf* L = nullptr, ShotHalf* R = nullptr) {
    const double rho0 = std::min(1e-4, 1e-3 / std::max(b, 1.0));
    ShotHalf l = shoot_left(b, alpha, rho0, opt);
    ShotHalf r = shoot_right(s, u0, opt);
    if (L) *L = l;
    if (R) *R = r;
    return std::array<double, 2>{l.f - r.f, l.df - r.df};
  };

  auto newton = [&](double b, double s, double& out_b, double& out_s, double& out_res) {
    auto nrm = [](const std::array<double, 2>& v) {
      return std::max(std::abs(v[0]), std::abs(v[1]));
    };
    std::array<double, 2> R = resid(b, s);
    double rn = nrm(R);
    for (int it = 0; it < 100 && rn > tol; ++it) {
      const double hb = 1e-6 * (1 + std::abs(b)), hs = 1e-6 * (1 + std::abs(s));
      auto Rb1 = resid(b + hb, s), Rb0 = resid(b - hb, s);
      auto Rs1 = resid(b, s + hs), Rs0 = resid(b, s - hs);
      const double j00 = (Rb1[0] - Rb0[0]) / (2 * hb), j01 = (Rs1[0] - Rs0[0]) / (2 * hs);
      const double j10 = (Rb1[1] - Rb0[1]) / (2 * hb), j11 = (Rs1[1] - Rs0[1]) / (2 * hs);
      const double det = j00 * j11 - j01 * j10;
      if (det == 0 || !std::isfinite(det)) break;
      const double db = (R[0] * j11 - R[1] * j01) / det;
      const double ds = (j00 * R[1] - j10 * R[0]) / det;
      double step = 1.0;
      for (int half = 0; half < 30; ++half) {
        const double bt = b - step * db, st = s - step * ds;
        if (bt > 0) {
          std::array<double, 2> Rt;
          try {
            Rt = resid(bt, st);
          } catch (const std::runtime_error&) {
            step *= 0.5;
            continue;
          }
          if (nrm(Rt) < rn) {
            b = bt;
            s = st;
            R = Rt;
            rn = nrm(Rt);
            break;
          }
        }
        step *= 0.5;
      }
      if (step < 1e-9) break;
    }
    out_b = b;
    out_s = s;
    out_res = rn;
    return rn <= tol;
  };

  double b = kSeedB[n], s = kSeedS[n], rn = 0;
  bool ok = newton(b, s, b, s, rn);

  if (!ok) {
    // coarse scan over the launch slope: b_n sits at the n -> n+1 transition of
    // the crossing count of the left solution
    double lo = 10, hi = 1e6, blo = 0, bhi = 0;
    const int M = 120;
    int prev = scan_crossings(lo, alpha, opt);
    double prev_b = lo;
    for (int i = 1; i <= M && blo == 0; ++i) {
      const double bt = lo * std::pow(hi / lo, static_cast<double>(i) / M);
      const int c = scan_crossings(bt, alpha, opt);
      if (prev <= n && c >= n + 1) {
        blo = prev_b;
        bhi = bt;
      }
      prev = c;
      prev_b = bt;
    }
    if (blo == 0) throw NoConvergence("shoot_profile: no crossing transition found", rn);
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(blo * bhi);
      if (scan_crossings(mid, alpha, opt) >= n + 1) bhi = mid; else blo = mid;
    }
    const double bguess = std::sqrt(blo * bhi);
    // 1-d pre-solve of the value match in s, then the full solve
    ShotHalf L = shoot_left(bguess, alpha, std::min(1e-4, 1e-3 / std::max(bguess, 1.0)), opt);
    double slo = -2, shi = 2;
    auto fgap = [&](double st) { return shoot_right(st, u0, opt).f - L.f; };
    double glo = fgap(slo), ghi = fgap(shi);
    double sguess = 0.5 * (slo + shi);
    if ((glo < 0) != (ghi < 0)) {
      for (int it = 0; it < 60; ++it) {
        sguess = 0.5 * (slo + shi);
        const double g = fgap(sguess);
        if ((g < 0) == (glo < 0)) { slo = sguess; glo = g; } else { shi = sguess; }
      }
    }
    ok = newton(bguess, sguess, b, s, rn);
    if (!ok) throw NoConvergence("shoot_profile: matching did not converge", rn);
  }

  Profile prof;
  prof.n = n;
  prof.alpha = alpha;
  prof.slope0 = b;
  prof.slope1 = s;
  prof.match_residual = rn;
  prof.rho_lo = std::min(1e-4, 1e-3 / std::max(b, 1.0));
  prof.rho_hi = 1 - u0;
  ShotHalf L, R;
  resid(b, s, &L, &R);
  prof.left = std::move(L.traj);
  prof.right = std::move(R.traj);

  const int found = crossings_on_trajectories(prof);
  if (found != n)
    throw WrongBranch("shoot_profile: converged to " + std::to_string(found) +
                          " equator crossings instead of " + std::to_string(n),
                      found);
  return prof;
}

int count_equator_crossings(const Profile& prof) { return crossings_on_trajectories(prof); }

GaugeMode gauge_mode(const Profile& prof) {
  GaugeMode gm;
  const int M = 800;
  gm.rho.resize(M + 1);
  gm.theta.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double rho = static_cast<double>(i) / M;
    gm.rho[i] = rho;
    if (i == 0 || i == M) {
      gm.theta[i] = 0;
      continue;
    }
    double f, df;
    prof.eval(rho, f, df);
    gm.theta[i] = rho * std::sqrt(1 - rho * rho) * df;
  }

  double prev = 0;
  for (int i = 0; i <= M; ++i) {
    const double rho = gm.rho[i];
    if (rho < 0.02 || rho > 0.98) continue;
    const double v = gm.theta[i];
    if (prev != 0 && v != 0 && (prev < 0) != (v < 0)) ++gm.interior_zeros;
    if (v != 0) prev = v;
  }

  // theta and (A_n theta) pointwise, with f''' from differentiating the profile
  // equation f'' = F(rho, f, f')
  auto a_theta = [&](double rho, double& th, double& ath) {
    double f, df;
    prof.eval(rho, f, df);
    const double r2 = rho * rho, om = 1 - r2;
    const double F = -2 / rho * df + std::sin(2 * f) / (r2 * om);
    const double dF_drho =
        2 * df / r2 + std::sin(2 * f) * (-2 / (r2 * rho * om) + 2 / (rho * om * om));
    const double dF_df = 2 * std::cos(2 * f) / (r2 * om);
    const double fppp = dF_drho + dF_df * df + (-2 / rho) * F;
    const double m = rho * std::sqrt(om);
    const double mp = (1 - 2 * r2) / std::sqrt(om);
    const double mpp = rho * (2 * r2 - 3) / (om * std::sqrt(om));
    th = m * df;
    const double thp = mp * df + m * F;
    const double thpp = mpp * df + 2 * mp * F + m * fppp;
    const double g = potential_g_value(prof, rho);
    ath = om * om * (-thpp - 2 / rho * thp + 2 / r2 * th) + g * th;
  };

  auto wfun = [](double rho) {
    const double om = 1 - rho * rho;
    return rho * rho / (om * om);
  };
  const double num = integrate_gl5(std::function<double(double)>([&](double rho) {
                                     double th, ath;
                                     a_theta(rho, th, ath);
                                     return ath * ath * wfun(rho);
                                   }),
                                   0.05, 0.95, 256);
  const double den = integrate_gl5(std::function<double(double)>([&](double rho) {
                                     double th, ath;
                                     a_theta(rho, th, ath);
                                     return th * th * wfun(rho);
                                   }),
                                   0.05, 0.95, 256);
  gm.residual = std::sqrt(num / den);
  return gm;
}

double potential_g_value(const Profile& prof, double rho) {
  if (rho < 0 || rho > 1) throw PreconditionViolation("potential_g_value: rho outside [0,1]");
  const double b = prof.slope0;
  const double rho_ser = std::min(1e-3, 0.1 / std::max(1.0, b));
  if (rho < rho_ser) {
    const double d = cubic_coef(b);
    const double c4g = (2.0 / 3) * b * b * b * b - 4 * b * d;
    const double g0 = 1 - 4 * b * b, g2 = 4 * b * b - 2 + 2 * c4g;
    return g0 + g2 * rho * rho;
  }
  const double f = prof.f_at(rho);
  const double om = 1 - rho * rho;
  return (2 * om * std::cos(2 * f) - rho * rho - 2 * om * om) / (rho * rho);
}

PotentialG potential_g(const Profile& prof) {
  PotentialG pg;
  const double b = prof.slope0;
  pg.at0 = 1 - 4 * b * b;
  pg.at1 = -1.0;
  const int M = 4000;
  pg.rho.resize(M + 1);
  pg.g.resize(M + 1);
  for (int i = 0; i <= M; ++i) {
    const double rho = static_cast<double>(i) / M;
    pg.rho[i] = rho;
    pg.g[i] = i == 0 ? pg.at0 : (i == M ? pg.at1 : potential_g_value(prof, rho));
    pg.sup = std::max(pg.sup, std::abs(pg.g[i]));
  }
  return pg;
}

double h_value(const Profile& prof, double rho) {
  if (rho <= 0) return std::numeric_limits<double>::infinity();
  const double b = prof.slope0;
  const double rho_ser = std::min(1e-3, 0.1 / std::max(1.0, b));
  if (rho < rho_ser) {
    const double d = cubic_coef(b);
    const double c4g = (2.0 / 3) * b * b * b * b - 4 * b * d;
    return 2 / (rho * rho) - 3 - 4 * b * b + (4 * b * b + 2 * c4g) * rho * rho;
  }
  const double f = prof.f_at(rho);
  return 2 * (1 - rho * rho) * std::cos(2 * f) / (rho * rho) - 1;
}

double infimum_on_interval(const std::function<double(double)>& fn, double lo, double hi) {
  std::vector<double> xs;
  for (int i = 0; i < 64; ++i)
    xs.push_back(lo * std::pow(std::min(0.01, hi) / lo, static_cast<double>(i) / 63));
  if (hi > 0.01)
    for (int i = 0; i <= 2048; ++i) xs.push_back(0.01 + (hi - 0.01) * i / 2048.0);

  std::size_t best = 0;
  double fbest = fn(xs[0]);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = fn(xs[i]);
    if (v < fbest) {
      fbest = v;
      best = i;
    }
  }
  if (best == 0 && fn(xs[1]) > fbest)
    return -std::numeric_limits<double>::infinity();  // still descending at the left edge
  if (best == 0 || best + 1 == xs.size()) return fbest;

  double a = xs[best - 1], c = xs[best + 1];
  const double gr = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  double f1 = fn(x1), f2 = fn(x2);
  for (int it = 0; it < 200 && c - a > 1e-14; ++it) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = fn(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = fn(x2);
    }
  }
  return std::min(std::min(f1, f2), fbest);
}

double eigen_lower_bound(const Profile& prof) {
  return infimum_on_interval([&](double rho) { return h_value(prof, rho); });
}

}  // namespace slwm
