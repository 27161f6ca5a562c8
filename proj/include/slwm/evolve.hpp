#pragma once

#include <functional>
#include <string>
#include <vector>

#include "slwm/wavemaps.hpp"

namespace slwm {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowupDetected : std::runtime_error {
  std::size_t step;
  double t;
  BlowupDetected(std::size_t s, double t_)
      : std::runtime_error("non-finite field at step " + std::to_string(s)), step(s), t(t_) {}
};

enum class EvolveMode { nonlinear_log, linear_hyperbolic };

// Two time levels of a CTCS evolution plus frozen scheme coefficients.
// Nonlinear mode: x = log(alpha + r), update
//   psi^{n+1} = 2 psi^n - psi^{n-1} + dt^2 (ca D2 psi + cb D psi + cc sin(2 psi)).
// Linear mode: uniform rho grid including rho=1; cc holds the potential factor
// and the last node evolves by the pointwise ODE (all derivative coefficients
// vanish there).
struct GridState {
  EvolveMode mode = EvolveMode::nonlinear_log;
  std::vector<double> xs;
  std::vector<double> psi;   // level n
  std::vector<double> prev;  // level n-1
  std::vector<double> ca, cb, cc;
  double dx = 0.0;
  double dt = 0.0;
  double alpha = 0.0;  // nonlinear mode
  double t = 0.0;
  std::size_t step = 0;
  double init_center_slope = 0.0;  // |psi_x(0, x0)|/alpha, blow-up reference
};

struct NonlinearConfig {
  double alpha = 1e-2;
  double R = 50.0;   // outer radius
  int N = 4000;      // cells
  double courant = 0.9;  // dt = courant * alpha * dx; must keep dt/dx <= alpha
};

struct LinearConfig {
  int N = 4000;          // cells on [0,1]
  double courant = 0.9;  // dsigma = courant * drho
  double sigma_end = 8.0;
};

// r-profile of the paper-style pulse: A sin r below r=pi/2, A exp(-(r-pi/2)^2/2) above.
std::function<double(double)> sin_gauss_data(double A);
std::function<double(double)> gauss_data(double A, double center, double width);

GridState init_taylor(const NonlinearConfig& cfg, const std::function<double(double)>& f,
                      const std::function<double(double)>& g);
void step_nonlinear(GridState& s);

double center_derivative(const GridState& s);  // psi_x(t, x0)/alpha
double energy_nonlinear(const GridState& s);

struct SweepRow {
  double amplitude = 0.0;
  double max_center_derivative = 0.0;
  bool blowup = false;
  std::size_t blowup_step = 0;
  double t_est = 0.0;  // 1/psi_x fit when blow-up was detected
  double t_end = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool monotone_flags = false;
  double critical_lo = 0.0;  // largest dispersing amplitude
  double critical_hi = 0.0;  // smallest blowing-up amplitude
};

// Evolves the named data for each amplitude up to t_max; blow-up when the
// center derivative exceeds threshold x its initial value or goes non-finite.
SweepResult run_blowup_sweep(const NonlinearConfig& cfg, const std::vector<double>& amplitudes,
                             double t_max = 8.0, double threshold = 1e3, int jobs = 1,
                             const std::string& preset = "sin_gauss");

GridState init_linear_hyperbolic(const LinearConfig& cfg, const Profile& prof,
                                 const std::function<double(double)>& data0,
                                 const std::function<double(double)>& data1);
void step_linear_hyperbolic(GridState& s);

struct Diagnostics {
  double center_derivative = 0.0;
  double hnorm = 0.0;  // sqrt of the weighted L^2 norm, rho=1 node excluded
  double energy = 0.0;
};

Diagnostics monitor(const GridState& s);
double hnorm_linear(const GridState& s);

}  // namespace slwm
