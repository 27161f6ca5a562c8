#include "slwm/problem.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "slwm/wavemaps.hpp"

namespace slwm {

namespace {

// Taylor coefficients of 1/(2-t)^2 = sum (j+1) t^j / 2^{j+2}
std::vector<double> two_minus_t_sq_inv(int K) {
  std::vector<double> b(static_cast<std::size_t>(K) + 1);
  for (int j = 0; j <= K; ++j) b[j] = (j + 1) * std::pow(2.0, -(j + 2));
  return b;
}

// Endpoint data shared by the rho^2-weight family on (0,1):
// p = rho^2, w = rho^2/(1-rho^2)^2. The local equation at an endpoint is
// u'' + P u' + Q u = 0 with P = p'/p and Q = ((lambda - V)w - q)/p.
LocalExpansion wavemap_left_expansion(cplx lambda, int K, double g0, double g2, bool has_g) {
  LocalExpansion ex;
  ex.x0 = 0.0;
  ex.side = Side::left;
  ex.pcoef = {2.0};
  ex.w_exponent = 2.0;
  ex.radius = 1.0;
  ex.p_of_x = [](double x) { return x * x; };
  // t^2 Q = (lambda - g(t)) t^2 / (1-t^2)^2 - 2, with 1/(1-t^2)^2 = sum (m+1) t^{2m}
  const int n = has_g ? std::min(K, 6) : K;
  ex.qcoef.assign(static_cast<std::size_t>(n) + 1, cplx(0));
  ex.qcoef[0] = -2.0;
  for (int k = 1; 2 * k <= n; ++k) {
    cplx c = (lambda - g0) * static_cast<double>(k);
    if (has_g && k >= 2) c -= g2 * static_cast<double>(k - 1);
    ex.qcoef[2 * k] = c;
  }
  return ex;
}

LocalExpansion wavemap_right_pcoef(int K) {
  LocalExpansion ex;
  ex.x0 = 1.0;
  ex.side = Side::right;
  ex.w_exponent = -2.0;
  ex.radius = 1.0;
  ex.p_of_x = [](double x) { return x * x; };
  // x = 1 - t flips P: t P_loc = -2t/(1-t)
  ex.pcoef.assign(static_cast<std::size_t>(K) + 1, cplx(0));
  for (int m = 1; m <= K; ++m) ex.pcoef[m] = -2.0;
  return ex;
}

LocalExpansion make_A_right_expansion(cplx lambda, int K) {
  // profile family: g(1-t) = -1 - 4t - 14t^2 + O(t^3), n-independent this far
  LocalExpansion ex = wavemap_right_pcoef(K);
  auto b = two_minus_t_sq_inv(2);
  const cplx num[3] = {lambda + 1.0, 4.0, 14.0};
  ex.qcoef.assign(3, cplx(0));
  for (int m = 0; m <= 2; ++m) {
    cplx acc = 0;
    for (int j = 0; j <= m; ++j) acc += num[j] * b[m - j];
    if (m >= 2) acc -= 2.0 * (m - 1);
    ex.qcoef[m] = acc;
  }
  return ex;
}

SLProblem make_wavemap_A() {
  SLProblem prob;
  prob.name = "wavemap_A";
  prob.a = 0.0;
  prob.b = 1.0;
  prob.p = [](double x) { return x * x; };
  prob.dp = [](double x) { return 2 * x; };
  prob.q = [](double) { return 2.0; };
  prob.w = [](double x) { return x * x / ((1 - x * x) * (1 - x * x)); };
  prob.left_powers = {2.0, 0.0, 2.0, true};
  prob.right_powers = {0.0, 0.0, -2.0, true};
  prob.left_expansion = [](cplx lambda, int K) {
    return wavemap_left_expansion(lambda, K, 0.0, 0.0, false);
  };
  prob.right_expansion = [](cplx lambda, int K) {
    LocalExpansion ex = wavemap_right_pcoef(K);
    // t^2 Q = lambda/(2-t)^2 - 2 t^2/(1-t)^2
    auto b = two_minus_t_sq_inv(K);
    ex.qcoef.assign(static_cast<std::size_t>(K) + 1, cplx(0));
    for (int m = 0; m <= K; ++m) {
      ex.qcoef[m] = lambda * b[m];
      if (m >= 2) ex.qcoef[m] -= 2.0 * (m - 1);
    }
    return ex;
  };
  return prob;
}

SLProblem make_A_n(std::shared_ptr<const Profile> prof) {
  SLProblem prob = make_wavemap_A();
  prob.name = "A_" + std::to_string(prof->n);
  prob.potential = [prof](double x) { return potential_g_value(*prof, x); };
  prob.right_powers = {0.0, -2.0, -2.0, true};  // q_total ~ g(1) w ~ t^{-2}
  const double b = prof->slope0;
  const double d = b / 5 - (2.0 / 15) * b * b * b;
  const double c4g = (2.0 / 3) * b * b * b * b - 4 * b * d;
  const double g0 = 1 - 4 * b * b;
  const double g2 = 4 * b * b - 2 + 2 * c4g;
  prob.left_expansion = [g0, g2](cplx lambda, int K) {
    return wavemap_left_expansion(lambda, K, g0, g2, true);
  };
  prob.right_expansion = [](cplx lambda, int K) { return make_A_right_expansion(lambda, K); };
  return prob;
}

SLProblem make_A_inf() {
  SLProblem prob = make_wavemap_A();
  prob.name = "A_inf";
  prob.q = [](double x) { return (x * x - 2) / ((1 - x * x) * (1 - x * x)); };
  prob.right_powers = {0.0, -2.0, -2.0, true};
  prob.left_expansion = [](cplx lambda, int K) {
    LocalExpansion ex;
    ex.x0 = 0.0;
    ex.side = Side::left;
    ex.pcoef = {2.0};
    ex.w_exponent = 2.0;
    ex.radius = 1.0;
    ex.p_of_x = [](double x) { return x * x; };
    // t^2 Q = (2 + (lambda-1) t^2) sum (m+1) t^{2m}
    ex.qcoef.assign(static_cast<std::size_t>(K) + 1, cplx(0));
    for (int k = 0; 2 * k <= K; ++k)
      ex.qcoef[2 * k] = 2.0 * (k + 1) + (lambda - 1.0) * static_cast<double>(k);
    return ex;
  };
  prob.right_expansion = [](cplx lambda, int K) {
    LocalExpansion ex = wavemap_right_pcoef(K);
    // t^2 Q = (lambda-1)/(2-t)^2 + 2/((1-t)^2 (2-t)^2)
    auto b = two_minus_t_sq_inv(K);
    ex.qcoef.assign(static_cast<std::size_t>(K) + 1, cplx(0));
    for (int m = 0; m <= K; ++m) {
      cplx conv = 0;
      for (int j = 0; j <= m; ++j) conv += (m - j + 1) * b[j];
      ex.qcoef[m] = (lambda - 1.0) * b[m] + 2.0 * conv;
    }
    return ex;
  };
  return prob;
}

SLProblem make_dirichlet() {
  SLProblem prob;
  prob.name = "dirichlet_laplacian";
  prob.a = 0.0;
  prob.b = 1.0;
  prob.p = [](double) { return 1.0; };
  prob.dp = [](double) { return 0.0; };
  prob.q = [](double) { return 0.0; };
  prob.w = [](double) { return 1.0; };
  prob.left_powers = {0.0, 0.0, 0.0, true};
  prob.right_powers = {0.0, 0.0, 0.0, true};
  auto expand = [](Side side, double x0) {
    return [side, x0](cplx lambda, int) {
      LocalExpansion ex;
      ex.x0 = x0;
      ex.side = side;
      ex.pcoef = {0.0};
      ex.qcoef = {0.0, 0.0, lambda};
      ex.w_exponent = 0.0;
      ex.radius = 1.0;
      ex.p_of_x = [](double) { return 1.0; };
      return ex;
    };
  };
  prob.left_expansion = expand(Side::left, 0.0);
  prob.right_expansion = expand(Side::right, 1.0);
  return prob;
}

SLProblem make_linwm() {
  SLProblem prob;
  prob.name = "linwm_halfline";
  prob.a = 0.0;
  prob.b = std::numeric_limits<double>::infinity();
  prob.b_infinite = true;
  prob.p = [](double x) { return x * x; };
  prob.dp = [](double x) { return 2 * x; };
  prob.q = [](double) { return 2.0; };
  prob.w = [](double x) { return x * x; };
  prob.left_powers = {2.0, 0.0, 2.0, true};
  prob.left_expansion = [](cplx lambda, int) {
    LocalExpansion ex;
    ex.x0 = 0.0;
    ex.side = Side::left;
    ex.pcoef = {2.0};
    ex.qcoef = {-2.0, 0.0, lambda};
    ex.w_exponent = 2.0;
    ex.radius = 1e9;  // entire coefficients; the truncation budget is the real guard
    ex.p_of_x = [](double x) { return x * x; };
    return ex;
  };
  return prob;
}

}  // namespace

SLProblem make_builtin(const std::string& id, const Profile* profile) {
  if (id == "wavemap_A") return make_wavemap_A();
  if (id == "A_inf") return make_A_inf();
  if (id == "dirichlet_laplacian") return make_dirichlet();
  if (id == "linwm_halfline") return make_linwm();
  if (id == "A_n" ||
      (id.size() == 3 && id.compare(0, 2, "A_") == 0 &&
       std::isdigit(static_cast<unsigned char>(id[2])))) {
    if (!profile) throw PreconditionViolation("make_builtin: A_n needs a profile");
    return make_A_n(std::shared_ptr<const Profile>(profile, [](const Profile*) {}));
  }
  throw PreconditionViolation("make_builtin: unknown id '" + id + "'");
}

SLProblem parse_problem_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (!j.contains("builtin") || !j["builtin"].is_string())
    throw PreconditionViolation("problem json: missing builtin id");
  const std::string id = j["builtin"].get<std::string>();

  SLProblem prob;
  if (id == "A_n" ||
      (id.size() == 3 && id.compare(0, 2, "A_") == 0 &&
       std::isdigit(static_cast<unsigned char>(id[2])))) {
    int n = id.size() == 3 ? id[2] - '0' : -1;
    if (j.contains("n")) n = j["n"].get<int>();
    if (n < 0 || n > 4) throw PreconditionViolation("problem json: A_n needs n in 0..4");
    auto prof = std::make_shared<Profile>(shoot_profile(n));
    prob = make_builtin("A_n", prof.get());
    // keep the profile alive inside the stored closure
    auto raw = prob.potential;
    prob.potential = [prof, raw](double x) { return raw(x); };
  } else {
    prob = make_builtin(id);
  }

  if (j.contains("name")) prob.name = j["name"].get<std::string>();
  if (j.contains("interval")) {
    const auto& iv = j["interval"];
    if (!iv.is_array() || iv.size() != 2)
      throw PreconditionViolation("problem json: interval must be [a, b]");
    const double a = iv[0].get<double>();
    const bool binf = iv[1].is_string();
    if (binf && iv[1].get<std::string>() != "inf")
      throw PreconditionViolation("problem json: interval end must be a number or \"inf\"");
    const double b = binf ? std::numeric_limits<double>::infinity() : iv[1].get<double>();
    if (std::abs(a - prob.a) > 1e-12 || binf != prob.b_infinite ||
        (!binf && std::abs(b - prob.b) > 1e-12))
      throw PreconditionViolation("problem json: interval disagrees with the builtin");
  }
  return prob;
}

SLProblem load_problem_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionViolation("load_problem_json: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str());
}

}  // namespace slwm
