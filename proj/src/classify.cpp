#include "slwm/classify.hpp"

#include <cmath>
#include <sstream>

#include "slwm/odeint.hpp"

namespace slwm {

namespace {

bool regular_by_powers(const SLProblem& prob, Side side) {
  const auto& pw = side == Side::left ? prob.left_powers : prob.right_powers;
  const bool finite = side == Side::left || !prob.b_infinite;
  if (!finite || !pw.known) return false;
  // 1/p, q, w integrable near the endpoint
  return pw.p_exp < 1.0 && pw.q_exp > -1.0 && pw.w_exp > -1.0;
}

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  LinearFit out;
  const double den = n * sxx - sx * sx;
  out.slope = (n * sxy - sx * sy) / den;
  out.intercept = (sy - out.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ymean = sy / n;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double pred = out.intercept + out.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
  }
  out.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

}  // namespace

std::string to_string(EndpointClass c) {
  switch (c) {
    case EndpointClass::Regular: return "regular";
    case EndpointClass::LimitCircle: return "limit-circle";
    case EndpointClass::LimitPoint: return "limit-point";
    default: return "inconclusive";
  }
}

WeylReport weyl_numeric_check(const SLProblem& prob, Side side, cplx lambda) {
  WeylReport rep;
  if (regular_by_powers(prob, side)) {
    rep.cls = EndpointClass::Regular;
    rep.note = "regular endpoint, no integration performed";
    return rep;
  }

  // (alpha - lambda)u = 0 as a real 4d system in (Re u, Im u, Re u', Im u')
  auto rhs = [&](double x, const std::array<double, 4>& y) {
    const double P = prob.dp(x) / prob.p(x);
    cplx V = prob.potential ? prob.potential(x) : 0.0;
    const cplx Q = ((lambda - V) * prob.w(x) - prob.q(x)) / prob.p(x);
    const cplx u(y[0], y[1]), du(y[2], y[3]);
    const cplx ddu = -P * du - Q * u;
    return std::array<double, 4>{y[2], y[3], ddu.real(), ddu.imag()};
  };

  const bool finite = side == Side::left || !prob.b_infinite;
  double anchor, target;
  std::vector<std::pair<double, double>> windows;
  if (finite) {
    const double e = side == Side::left ? prob.a : prob.b;
    const double len = prob.b_infinite ? 1.0 : prob.b - prob.a;
    const double L = 0.4 * len;
    const int m = 12;
    anchor = side == Side::left ? e + L : e - L;
    const double r = 0.5;
    for (int k = 0; k < m; ++k) {
      const double d_hi = L * std::pow(r, k), d_lo = L * std::pow(r, k + 1);
      if (side == Side::left) windows.push_back({e + d_lo, e + d_hi});
      else windows.push_back({e - d_hi, e - d_lo});
    }
    target = side == Side::left ? e + L * std::pow(r, m) : e - L * std::pow(r, m);
  } else {
    const double D = 2.0;
    const int m = 10;
    anchor = prob.a + 1.0;
    for (int k = 0; k < m; ++k) windows.push_back({anchor + k * D, anchor + (k + 1) * D});
    target = anchor + m * D;
  }

  OdeOptions opt;
  opt.rtol = 1e-9;
  opt.atol = 1e-12;

  auto run = [&](const std::array<double, 4>& y0) {
    Trajectory<4> tr = integrate<4>(rhs, anchor, y0, target, opt);
    std::vector<double> ks, logs;
    for (std::size_t k = 0; k < windows.size(); ++k) {
      double acc = integrate_gl5(std::function<double(double)>([&](double x) {
                                   auto y = tr.eval(x);
                                   return (y[0] * y[0] + y[1] * y[1]) * prob.w(x);
                                 }),
                                 windows[k].first, windows[k].second, 8);
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(std::max(acc, 1e-300)));
    }
    auto fit = fit_line(ks, logs);
    WeylFit wf;
    wf.slope = fit.slope;
    wf.r2 = fit.r2;
    wf.in_space = fit.slope < -0.02;
    return wf;
  };

  rep.fit1 = run({1, 0, 0, 0});
  rep.fit2 = run({0, 0, 1, 0});

  if (rep.fit1.r2 < 0.99 || rep.fit2.r2 < 0.99) {
    rep.cls = EndpointClass::Inconclusive;
    rep.note = "window-integral regression below the R^2 gate";
  } else if (rep.fit1.in_space && rep.fit2.in_space) {
    rep.cls = EndpointClass::LimitCircle;
  } else {
    rep.cls = EndpointClass::LimitPoint;
  }
  return rep;
}

EndpointReport classify_endpoint(const SLProblem& prob, Side side, cplx lambda, double delta) {
  EndpointReport rep;
  std::ostringstream ev;

  if (regular_by_powers(prob, side)) {
    rep.cls = EndpointClass::Regular;
    rep.evidence = "1/p, q, w integrable by the endpoint power test";
    return rep;
  }

  const auto& mk = side == Side::left ? prob.left_expansion : prob.right_expansion;
  if (!mk) {
    auto weyl = weyl_numeric_check(prob, side, lambda);
    rep.used_numeric = true;
    rep.numeric_cls = weyl.cls;
    rep.cls = weyl.cls;
    rep.evidence = "no local expansion; " + weyl.note;
    if (weyl.note.empty())
      rep.evidence = "no local expansion; window-integral slopes " +
                     std::to_string(weyl.fit1.slope) + ", " + std::to_string(weyl.fit2.slope);
    return rep;
  }

  LocalExpansion ex = mk(lambda, 8);
  IndicialPair ip = indices(ex);
  rep.s_lo = ip.s_minus;
  rep.s_hi = ip.s_plus;
  rep.crit_lo = 2 * ip.s_minus.real() + ex.w_exponent;
  rep.crit_hi = 2 * ip.s_plus.real() + ex.w_exponent;
  ev << "indices (" << ip.s_minus << ", " << ip.s_plus << "), criterion values " << rep.crit_lo
     << ", " << rep.crit_hi << " vs -1";

  if (std::abs(rep.crit_lo + 1) <= delta || std::abs(rep.crit_hi + 1) <= delta) {
    rep.borderline = true;
    rep.used_numeric = true;
    auto weyl = weyl_numeric_check(prob, side, lambda);
    rep.numeric_cls = weyl.cls;
    rep.cls = EndpointClass::Inconclusive;
    ev << "; borderline, numeric fallback says " << to_string(weyl.cls);
    rep.evidence = ev.str();
    return rep;
  }

  rep.cls = (rep.crit_lo > -1 && rep.crit_hi > -1) ? EndpointClass::LimitCircle
                                                   : EndpointClass::LimitPoint;
  rep.evidence = ev.str();
  return rep;
}

SelfAdjointnessReport defect_indices(const SLProblem& prob) {
  SelfAdjointnessReport rep;
  rep.left = classify_endpoint(prob, Side::left);
  rep.right = classify_endpoint(prob, Side::right);

  auto effective = [](const EndpointReport& er, const char* which) {
    EndpointClass c = er.cls;
    if (c == EndpointClass::Inconclusive) c = er.numeric_cls;
    if (c == EndpointClass::Inconclusive)
      throw std::runtime_error(std::string("defect_indices: ") + which +
                               " endpoint classification inconclusive");
    return c;
  };
  const EndpointClass cl = effective(rep.left, "left");
  const EndpointClass cr = effective(rep.right, "right");

  int count = 0;
  std::string at;
  if (cl != EndpointClass::LimitPoint) {
    ++count;
    at = "left";
  }
  if (cr != EndpointClass::LimitPoint) {
    ++count;
    at += at.empty() ? "right" : ",right";
  }
  rep.defect_plus = rep.defect_minus = count;
  rep.max_domain_selfadjoint = count == 0;
  rep.boundary_condition_needed_at = at;
  return rep;
}

}  // namespace slwm
