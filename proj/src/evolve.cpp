#include "slwm/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace slwm {

namespace {

constexpr double kPi = 3.14159265358979323846;

double second_diff(const std::vector<double>& v, std::size_t i, double dx) {
  return (v[i + 1] - 2 * v[i] + v[i - 1]) / (dx * dx);
}

double central_diff(const std::vector<double>& v, std::size_t i, double dx) {
  return (v[i + 1] - v[i - 1]) / (2 * dx);
}

}  // namespace

std::function<double(double)> sin_gauss_data(double A) {
  return [A](double r) {
    if (r < kPi / 2) return A * std::sin(r);
    const double d = r - kPi / 2;
    return A * std::exp(-0.5 * d * d);
  };
}

std::function<double(double)> gauss_data(double A, double center, double width) {
  return [=](double r) {
    const double d = (r - center) / width;
    const double m = (r + center) / width;
    // odd reflection about r=0 keeps the pulse zero at the origin
    return A * (std::exp(-0.5 * d * d) - std::exp(-0.5 * m * m));
  };
}

GridState init_taylor(const NonlinearConfig& cfg, const std::function<double(double)>& f,
                      const std::function<double(double)>& g) {
  if (cfg.N < 8) throw ConfigError("init_taylor: too few cells");
  if (!(cfg.alpha > 0) || !(cfg.R > 0)) throw ConfigError("init_taylor: bad geometry");

  GridState s;
  s.mode = EvolveMode::nonlinear_log;
  s.alpha = cfg.alpha;
  const double x0 = std::log(cfg.alpha), x1 = std::log(cfg.alpha + cfg.R);
  const std::size_t M = static_cast<std::size_t>(cfg.N);
  s.dx = (x1 - x0) / cfg.N;
  s.dt = cfg.courant * cfg.alpha * s.dx;
  if (s.dt / s.dx > cfg.alpha * (1 + 1e-12))
    throw ConfigError("init_taylor: time step violates dt/dx <= alpha");

  s.xs.resize(M + 1);
  s.ca.assign(M + 1, 0.0);
  s.cb.assign(M + 1, 0.0);
  s.cc.assign(M + 1, 0.0);
  std::vector<double> f0(M + 1, 0.0), g0(M + 1, 0.0);
  double fmax = 0;
  for (std::size_t i = 0; i <= M; ++i) {
    const double x = x0 + i * s.dx;
    s.xs[i] = x;
    const double r = std::exp(x) - cfg.alpha;
    f0[i] = f(r);
    g0[i] = g(r);
    fmax = std::max(fmax, std::abs(f0[i]));
    if (i == 0 || i == M) continue;
    const double ex = std::exp(x);
    s.ca[i] = std::exp(-2 * x);
    s.cb[i] = std::exp(-2 * x) * (ex + cfg.alpha) / r;
    s.cc[i] = -1.0 / (r * r);
  }
  if (std::abs(f0[0]) > 1e-8 * std::max(fmax, 1e-300) ||
      std::abs(f0[M]) > 1e-8 * std::max(fmax, 1e-300))
    throw ConfigError("init_taylor: data not boundary-compatible");
  f0[0] = f0[M] = 0.0;

  s.prev = f0;
  s.psi.assign(M + 1, 0.0);
  for (std::size_t i = 1; i < M; ++i) {
    const double lap = s.ca[i] * second_diff(f0, i, s.dx) + s.cb[i] * central_diff(f0, i, s.dx) +
                       s.cc[i] * std::sin(2 * f0[i]);
    s.psi[i] = f0[i] + s.dt * g0[i] + 0.5 * s.dt * s.dt * lap;
  }
  s.t = s.dt;
  s.step = 1;
  // one-sided second-order slope at the center, from the level-0 data
  s.init_center_slope =
      std::abs((-3 * f0[0] + 4 * f0[1] - f0[2]) / (2 * s.dx)) / cfg.alpha;
  return s;
}

void step_nonlinear(GridState& s) {
  if (s.mode != EvolveMode::nonlinear_log)
    throw PreconditionViolation("step_nonlinear: wrong mode");
  const std::size_t M = s.xs.size() - 1;
  std::vector<double> next(M + 1, 0.0);
  const double dt2 = s.dt * s.dt;
  bool finite = true;
  for (std::size_t i = 1; i < M; ++i) {
    const double lap = s.ca[i] * second_diff(s.psi, i, s.dx) +
                       s.cb[i] * central_diff(s.psi, i, s.dx) +
                       s.cc[i] * std::sin(2 * s.psi[i]);
    next[i] = 2 * s.psi[i] - s.prev[i] + dt2 * lap;
    if (!std::isfinite(next[i])) finite = false;
  }
  s.prev.swap(s.psi);
  s.psi.swap(next);
  s.t += s.dt;
  ++s.step;
  if (!finite) throw BlowupDetected(s.step, s.t);
}

double center_derivative(const GridState& s) {
  return (-3 * s.psi[0] + 4 * s.psi[1] - s.psi[2]) / (2 * s.dx) / s.alpha;
}

double energy_nonlinear(const GridState& s) {
  // centered at t - dt/2: psi_t from the two stored levels, fields averaged
  const std::size_t M = s.xs.size() - 1;
  std::vector<double> psi(M + 1), psit(M + 1), psir(M + 1), r(M + 1);
  for (std::size_t i = 0; i <= M; ++i) {
    psi[i] = 0.5 * (s.psi[i] + s.prev[i]);
    psit[i] = (s.psi[i] - s.prev[i]) / s.dt;
    r[i] = std::exp(s.xs[i]) - s.alpha;
  }
  for (std::size_t i = 0; i <= M; ++i) {
    const double ex = std::exp(s.xs[i]);
    double px;
    if (i == 0) px = (-3 * psi[0] + 4 * psi[1] - psi[2]) / (2 * s.dx);
    else if (i == M) px = (3 * psi[M] - 4 * psi[M - 1] + psi[M - 2]) / (2 * s.dx);
    else px = central_diff(psi, i, s.dx);
    psir[i] = px / ex;
  }
  return energy(psi, psit, psir, r);
}

SweepResult run_blowup_sweep(const NonlinearConfig& cfg, const std::vector<double>& amplitudes,
                             double t_max, double threshold, int jobs,
                             const std::string& preset) {
  if (amplitudes.empty()) throw ConfigError("run_blowup_sweep: no amplitudes");
  auto make_data = [&](double A) {
    if (preset == "sin_gauss") return sin_gauss_data(A);
    if (preset == "gauss") return gauss_data(A, 2.0, 0.5);
    throw ConfigError("run_blowup_sweep: unknown preset '" + preset + "'");
  };

  SweepResult sw;
  sw.rows.resize(amplitudes.size());

  auto run_one = [&](std::size_t idx) {
    const double A = amplitudes[idx];
    SweepRow row;
    row.amplitude = A;
    GridState s = init_taylor(cfg, make_data(A), [](double) { return 0.0; });
    const double ref = std::max(std::abs(s.init_center_slope), 1e-12);
    std::vector<double> ts, cds;
    try {
      while (s.t < t_max) {
        step_nonlinear(s);
        const double cd = std::abs(center_derivative(s));
        row.max_center_derivative = std::max(row.max_center_derivative, cd);
        if (s.step % 16 == 0 || cd >= threshold * ref) {
          ts.push_back(s.t);
          cds.push_back(cd);
        }
        if (cd >= threshold * ref) {
          row.blowup = true;
          row.blowup_step = s.step;
          break;
        }
      }
    } catch (const BlowupDetected& bd) {
      row.blowup = true;
      row.blowup_step = bd.step;
    }
    row.t_end = s.t;

    if (row.blowup && ts.size() >= 4) {
      // 1/cd is asymptotically linear in t; extrapolate its zero for T
      double peak = 0;
      for (double c : cds) peak = std::max(peak, c);
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < ts.size(); ++i)
        if (cds[i] >= 0.05 * peak && cds[i] > 0) {
          xs.push_back(ts[i]);
          ys.push_back(1.0 / cds[i]);
        }
      if (xs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          sx += xs[i];
          sy += ys[i];
          sxx += xs[i] * xs[i];
          sxy += xs[i] * ys[i];
        }
        const double nn = static_cast<double>(xs.size());
        const double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / nn;
        if (slope < 0) row.t_est = -icpt / slope;
      }
    }
    sw.rows[idx] = row;
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (std::size_t i = 0; i < amplitudes.size(); ++i) run_one(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t i = t; i < amplitudes.size(); i += jobs) run_one(i);
      });
    for (auto& th : pool) th.join();
  }

  sw.monotone_flags = true;
  bool seen_blowup = false;
  for (const auto& row : sw.rows) {
    if (row.blowup) {
      seen_blowup = true;
      if (sw.critical_hi == 0.0) sw.critical_hi = row.amplitude;
    } else {
      if (seen_blowup) sw.monotone_flags = false;
      sw.critical_lo = row.amplitude;
    }
  }
  return sw;
}

GridState init_linear_hyperbolic(const LinearConfig& cfg, const Profile& prof,
                                 const std::function<double(double)>& data0,
                                 const std::function<double(double)>& data1) {
  if (cfg.N < 8) throw ConfigError("init_linear_hyperbolic: too few cells");
  if (cfg.courant > 0.9 + 1e-12)
    throw ConfigError("init_linear_hyperbolic: needs dsigma <= 0.9 drho");

  GridState s;
  s.mode = EvolveMode::linear_hyperbolic;
  s.alpha = 0.0;
  const std::size_t M = static_cast<std::size_t>(cfg.N);
  s.dx = 1.0 / cfg.N;
  s.dt = cfg.courant * s.dx;
  s.xs.resize(M + 1);
  s.ca.assign(M + 1, 0.0);
  s.cb.assign(M + 1, 0.0);
  s.cc.assign(M + 1, 0.0);
  std::vector<double> f0(M + 1, 0.0), g0(M + 1, 0.0);
  double fmax = 0;
  for (std::size_t i = 0; i <= M; ++i) {
    const double rho = i * s.dx;
    s.xs[i] = rho;
    f0[i] = data0(rho);
    g0[i] = data1(rho);
    fmax = std::max(fmax, std::abs(f0[i]));
    if (i == 0) continue;  // Dirichlet at the center
    const double om = 1 - rho * rho;
    double V;
    if (i == M) {
      V = -1.0;  // limit of the potential at rho=1
    } else {
      const double f = prof.f_at(rho);
      V = (2 * om * std::cos(2 * f) - rho * rho) / (rho * rho);
    }
    s.ca[i] = om * om;
    s.cb[i] = i == M ? 0.0 : 2 * om * om / rho;
    s.cc[i] = -V;
  }
  // the rho=1 trace must vanish for the (1-rho)^{1/2} solution class; a
  // nonzero seed there rides the pointwise ODE and grows like e^sigma
  if (std::abs(f0[M]) > 1e-6 * std::max(fmax, 1e-300))
    throw ConfigError("init_linear_hyperbolic: data must vanish at rho=1");
  f0[0] = 0.0;
  f0[M] = 0.0;
  g0[M] = 0.0;

  s.prev = f0;
  s.psi.assign(M + 1, 0.0);
  for (std::size_t i = 1; i <= M; ++i) {
    double lap = s.cc[i] * f0[i];
    if (i < M)
      lap += s.ca[i] * second_diff(f0, i, s.dx) + s.cb[i] * central_diff(f0, i, s.dx);
    s.psi[i] = f0[i] + s.dt * g0[i] + 0.5 * s.dt * s.dt * lap;
  }
  s.t = s.dt;
  s.step = 1;
  s.init_center_slope = std::abs((-3 * f0[0] + 4 * f0[1] - f0[2]) / (2 * s.dx));
  return s;
}

void step_linear_hyperbolic(GridState& s) {
  if (s.mode != EvolveMode::linear_hyperbolic)
    throw PreconditionViolation("step_linear_hyperbolic: wrong mode");
  const std::size_t M = s.xs.size() - 1;
  std::vector<double> next(M + 1, 0.0);
  const double dt2 = s.dt * s.dt;
  bool finite = true;
  for (std::size_t i = 1; i <= M; ++i) {
    double lap = s.cc[i] * s.psi[i];
    if (i < M)
      lap += s.ca[i] * second_diff(s.psi, i, s.dx) + s.cb[i] * central_diff(s.psi, i, s.dx);
    next[i] = 2 * s.psi[i] - s.prev[i] + dt2 * lap;
    if (!std::isfinite(next[i])) finite = false;
  }
  s.prev.swap(s.psi);
  s.psi.swap(next);
  s.t += s.dt;
  ++s.step;
  if (!finite) throw BlowupDetected(s.step, s.t);
}

double hnorm_linear(const GridState& s) {
  const std::size_t M = s.xs.size() - 1;
  double acc = 0;
  for (std::size_t i = 1; i < M; ++i) {
    const double rho = s.xs[i], om = 1 - rho * rho;
    const double w = rho * rho / (om * om);
    acc += w * s.psi[i] * s.psi[i] * s.dx;
  }
  return std::sqrt(acc);
}

namespace {

double energy_linear(const GridState& s) {
  // semi-discrete conserved form at t - dt/2, rho=1 node excluded
  const std::size_t M = s.xs.size() - 1;
  double acc = 0;
  for (std::size_t i = 1; i < M; ++i) {
    const double rho = s.xs[i], om = 1 - rho * rho;
    const double w = rho * rho / (om * om);
    const double pd = (s.psi[i] - s.prev[i]) / s.dt;
    const double V = -s.cc[i];
    const double avg = 0.5 * (s.psi[i] + s.prev[i]);
    acc += (w * pd * pd + V * w * avg * avg) * s.dx;
  }
  for (std::size_t i = 0; i < M; ++i) {
    const double rho = 0.5 * (s.xs[i] + s.xs[i + 1]);
    const double p = rho * rho;
    const double da = 0.5 * ((s.psi[i + 1] - s.psi[i]) + (s.prev[i + 1] - s.prev[i])) / s.dx;
    acc += p * da * da * s.dx;
  }
  return acc;
}

}  // namespace

Diagnostics monitor(const GridState& s) {
  Diagnostics d;
  if (s.mode == EvolveMode::nonlinear_log) {
    d.center_derivative = center_derivative(s);
    d.energy = energy_nonlinear(s);
  } else {
    d.hnorm = hnorm_linear(s);
    d.energy = energy_linear(s);
  }
  return d;
}

}  // namespace slwm
