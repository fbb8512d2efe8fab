#pragma once

#include <cstdint>
#include <vector>

#include "mannctl/integrate.hpp"
#include "mannctl/matrix.hpp"

namespace mannctl {

// Unknown function y = f(x) realized as a drifting two-layer network plus a
// bounded residual: f(x) = W^T sigma(V(t)^T x) + delta(t). No biases here.
struct TrueFunction {
  Matrix w;          // N x 1, fixed
  Matrix v0;         // n x N at t = 0
  double delta_bar = 0.0;
  double delta_omega = 1.0;  // delta(t) = delta_bar sin(omega t)
};

// Throws NotIrreducible when a hidden unit is degenerate (zero or duplicated
// column of V, or a vanishing outer weight).
void check_irreducible(const TrueFunction& fn);

struct EstimatorState {
  Matrix w_hat;    // N, plain estimator
  Matrix v_hat;    // n x N
  Matrix w_hat_m;  // N, memory estimator
  Matrix v_hat_m;  // n x N
  Matrix mu;       // N x n_s
  double alpha = 1.0;
};

struct PlainEstimate {
  double y_hat;
  double error;
};

// y_hat = W_hat^T sigma(V_hat^T x), e = y - y_hat.
PlainEstimate plain_estimate(const Matrix& w_hat, const Matrix& v_hat, const Vector& x,
                             double y);

struct MemEstimate {
  double y_hat;
  double error;
  Vector m_r;
};

// y_hat_m = W_m^T (sigma(V_m^T x) + alpha M_r) with the hidden output as the
// read query.
MemEstimate mem_estimate(const Matrix& w_hat_m, const Matrix& v_hat_m, const Vector& x,
                         const Matrix& mu, double alpha, double y);

// Both estimators input-output equivalent to the true network at t = 0:
// plain weights copy (W, V), memory outer weights W/(1+alpha), and every
// memory slot holds the initial hidden output so the read equals it.
EstimatorState equivalent_init(const TrueFunction& fn, const Vector& x0, double alpha,
                               int n_s);

struct EstimationConfig {
  int n = 2;
  int hidden = 3;
  int n_s = 1;
  double alpha = 1.0;
  double eps = 1e-3;      // slow-timescale scaling
  double gamma = 10.0;    // gradient gain of the slow weight updates
  double c_w = 1.0;       // write gain; 1 keeps the equivalent init stationary
  double horizon = 10.0;
  double step = 1e-3;
  double w_norm = 3.5;    // true outer weights rescaled to this norm (0 = raw)
  double pulse_mag = 2.0; // V-rate entries uniform on [-mag, mag)
  double t_jump = 1.0;
  double ramp_duration = 1.0;
  double delta_bar = 0.0;
  double delta_omega = 1.0;
  double slack_c = 2.0;
  uint64_t seed = 0;
};

// Seed-expanded experiment: the true function, the shared disturbance
// realization, and the equivalent initialization.
struct EstimationSetup {
  EstimationConfig cfg;
  TrueFunction fn;
  Vector x0;        // n
  Vector d_s;       // n, constant input drift direction
  Matrix v_rate;    // n x N, d_f during the ramp window
  EstimatorState init;

  Matrix v_at(double t) const;   // V0 + clamped-ramp * rate
  Vector x_at(double t) const;   // x0 + eps d_s t
  double delta_at(double t) const;
  std::vector<double> events() const;  // ramp start / end
};

EstimationSetup make_setup(const EstimationConfig& cfg);

struct EstimationTraces {
  std::vector<double> times;
  std::vector<double> e;        // plain estimator, full dynamics
  std::vector<double> e_m;      // memory estimator, full dynamics
  std::vector<double> delta;
  std::vector<double> mr_dev;   // ||M_r - sigma_hat_m|| along the full run
  double max_abs_e = 0.0;
  double max_abs_e_m = 0.0;
};

// Integrates both estimators against the same disturbance realization with
// slow weight updates scaled by eps and the memory write left unscaled.
EstimationTraces run_two_timescale(const EstimationSetup& setup);

struct BoundaryLayerRun {
  std::vector<double> times;
  std::vector<double> e_bl;      // plain estimator, slow states frozen
  std::vector<double> e_m_bl;    // memory estimator, slow states frozen
  std::vector<double> mr_dev_bl; // ||M_r^bl - sigma^bl||
  double e_bl_max = 0.0;
  double delta_m_est = 0.0;      // max of mr_dev_bl
};

BoundaryLayerRun boundary_layer_run(const EstimationSetup& setup);

struct Theorem1Report {
  double max_abs_e_m = 0.0;
  double e_bl_max = 0.0;
  double delta_m_est = 0.0;
  double bound = 0.0;
  double ratio = 0.0;  // max|e_m| / e_bl_max
  bool pass = false;
};

// pass iff max |e_m| <= e_bl_max / (1 + alpha) + c alpha (delta_bar + delta_m).
Theorem1Report theorem1_check(const EstimationTraces& traces, double alpha,
                              double delta_bar, double delta_m_est, double e_bl_max,
                              double slack_c = 2.0);

// Convenience: setup + both runs + check for one seed.
Theorem1Report run_theorem1_experiment(const EstimationConfig& cfg);

}  // namespace mannctl
