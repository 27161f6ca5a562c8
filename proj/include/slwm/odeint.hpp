#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "slwm/core.hpp"

namespace slwm {

struct SingularityEncountered : std::runtime_error {
  double last_x;
  explicit SingularityEncountered(double x)
      : std::runtime_error("step size underflow at x = " + std::to_string(x)), last_x(x) {}
};

struct NonFiniteRHS : std::runtime_error {
  double at_x;
  explicit NonFiniteRHS(double x)
      : std::runtime_error("non-finite rhs at x = " + std::to_string(x)), at_x(x) {}
};

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 = automatic
  std::size_t max_steps = 1000000;
};

// Accepted steps of one integration. x is strictly monotone (either direction);
// dense evaluation between nodes is cubic Hermite, exact at the nodes.
template <int N>
struct Trajectory {
  using State = std::array<double, N>;
  std::vector<double> x;
  std::vector<State> y;
  std::vector<State> f;  // rhs at the nodes, for Hermite interpolation
  std::size_t accepted = 0;
  std::size_t rejected = 0;

  bool forward() const { return x.back() >= x.front(); }

  std::size_t locate(double xi) const {
    const bool fwd = forward();
    std::size_t lo = 0, hi = x.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (fwd ? (x[mid] <= xi) : (x[mid] >= xi)) lo = mid; else hi = mid;
    }
    return lo;
  }

  State eval(double xi) const {
    std::size_t i = locate(xi);
    const double h = x[i + 1] - x[i];
    const double t = (xi - x[i]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    State out;
    for (int k = 0; k < N; ++k)
      out[k] = h00 * y[i][k] + h * h10 * f[i][k] + h01 * y[i + 1][k] + h * h11 * f[i + 1][k];
    return out;
  }

  State deriv(double xi) const {
    std::size_t i = locate(xi);
    const double h = x[i + 1] - x[i];
    const double t = (xi - x[i]) / h;
    const double d00 = 6 * t * (t - 1) / h;
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -d00;
    const double d11 = t * (3 * t - 2);
    State out;
    for (int k = 0; k < N; ++k)
      out[k] = d00 * y[i][k] + d10 * f[i][k] + d01 * y[i + 1][k] + d11 * f[i + 1][k];
    return out;
  }
};

// Dormand-Prince 5(4) with PI step control.
template <int N, class RHS>
Trajectory<N> integrate(RHS&& rhs, double x0, const std::array<double, N>& y0, double x1,
                        const OdeOptions& opt = {}) {
  using State = std::array<double, N>;
  if (x0 == x1) throw PreconditionViolation("integrate: x0 == x1");

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

  const double dir = (x1 > x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  auto eval_rhs = [&](double x, const State& y) {
    State dy = rhs(x, y);
    for (int k = 0; k < N; ++k)
      if (!std::isfinite(dy[k])) throw NonFiniteRHS(x);
    return dy;
  };

  Trajectory<N> tr;
  tr.x.reserve(256);
  tr.y.reserve(256);
  tr.f.reserve(256);

  double x = x0;
  State y = y0;
  State k1 = eval_rhs(x, y);
  tr.x.push_back(x);
  tr.y.push_back(y);
  tr.f.push_back(k1);

  double h = opt.initial_step;
  if (h == 0.0) {
    double ynorm = 0, fnorm = 0;
    for (int k = 0; k < N; ++k) {
      ynorm = std::max(ynorm, std::abs(y[k]));
      fnorm = std::max(fnorm, std::abs(k1[k]));
    }
    h = (fnorm > 0) ? 0.01 * (opt.atol + opt.rtol * ynorm) / fnorm + 1e-8 * span : 1e-3 * span;
    h = std::min(h, 0.1 * span);
  }
  h = std::abs(h) * dir;

  double errold = 1e-4;
  std::size_t steps = 0;
  while ((x - x1) * dir < 0) {
    if (++steps > opt.max_steps) throw SingularityEncountered(x);
    if ((x + h - x1) * dir > 0) h = x1 - x;
    if (std::abs(x1 - x) < 8 * std::numeric_limits<double>::epsilon() * (std::abs(x1) + std::abs(x)))
      break;
    if (std::abs(h) < 16 * std::numeric_limits<double>::epsilon() * (std::abs(x) + std::abs(h)))
      throw SingularityEncountered(x);

    State k2, k3, k4, k5, k6, k7, yt, y5;
    for (int k = 0; k < N; ++k) yt[k] = y[k] + h * a21 * k1[k];
    k2 = eval_rhs(x + c2 * h, yt);
    for (int k = 0; k < N; ++k) yt[k] = y[k] + h * (a31 * k1[k] + a32 * k2[k]);
    k3 = eval_rhs(x + c3 * h, yt);
    for (int k = 0; k < N; ++k) yt[k] = y[k] + h * (a41 * k1[k] + a42 * k2[k] + a43 * k3[k]);
    k4 = eval_rhs(x + c4 * h, yt);
    for (int k = 0; k < N; ++k)
      yt[k] = y[k] + h * (a51 * k1[k] + a52 * k2[k] + a53 * k3[k] + a54 * k4[k]);
    k5 = eval_rhs(x + c5 * h, yt);
    for (int k = 0; k < N; ++k)
      yt[k] = y[k] + h * (a61 * k1[k] + a62 * k2[k] + a63 * k3[k] + a64 * k4[k] + a65 * k5[k]);
    k6 = eval_rhs(x + h, yt);
    for (int k = 0; k < N; ++k)
      y5[k] = y[k] + h * (b1 * k1[k] + b3 * k3[k] + b4 * k4[k] + b5 * k5[k] + b6 * k6[k]);
    k7 = eval_rhs(x + h, y5);  // FSAL

    double err = 0;
    for (int k = 0; k < N; ++k) {
      const double ek = h * (e1 * k1[k] + e3 * k3[k] + e4 * k4[k] + e5 * k5[k] + e6 * k6[k] +
                             e7 * k7[k]);
      const double sk = opt.atol + opt.rtol * std::max(std::abs(y[k]), std::abs(y5[k]));
      err = std::max(err, std::abs(ek) / sk);
    }

    if (err <= 1.0) {
      x += h;
      y = y5;
      k1 = k7;
      tr.x.push_back(x);
      tr.y.push_back(y);
      tr.f.push_back(k1);
      ++tr.accepted;
      const double e = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e, -0.2) * std::pow(errold, 0.04);
      fac = std::min(5.0, std::max(0.2, fac));
      errold = e;
      h *= fac;
    } else {
      ++tr.rejected;
      double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
      h *= fac;
    }
  }
  return tr;
}

}  // namespace slwm
