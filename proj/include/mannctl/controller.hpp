#pragma once

#include <cstdint>

#include "mannctl/integrate.hpp"
#include "mannctl/matrix.hpp"
#include "mannctl/memory.hpp"
#include "mannctl/nn.hpp"
#include "mannctl/scenario.hpp"

namespace mannctl {

struct ControllerConfig {
  double k_v = 1.0;  // LQR state cost, Q = K_v I
  double k_r = 1.0;  // LQR input cost, R = K_r I
  double k_z = 0.0;  // robustifying gain
  double z_m = 10.0; // weight-norm bound in the robustifying term
  NnGains gains;
  double c_w = 0.75;
  int n_s = 1;
  bool enable_info_term = true;
  bool enable_error_term = true;
  bool memory_enabled = true;
  int lyapunov_rhs_factor = 1;  // 1 or 2: A_ref^T P + P A_ref = -factor * K_v I
  double softmax_temperature = 1.0;
  uint64_t seed = 0;
};

// Gain schedule tying the adaptation gains to the LQR state cost; the
// robustifying gain stays caller-chosen.
NnGains theorem_gains(double k_v);

struct ControllerConsts {
  Matrix p_care;  // CARE solution
  Matrix k_lqr;   // m x n
  Matrix a_ref;   // A - B K_lqr, Hurwitz
  Matrix p;       // Lyapunov solution for A_ref
  Matrix b;       // plant input matrix, kept for q_mu
};

ControllerConsts build_controller(const PlantModel& plant, const ControllerConfig& cfg);

// q_mu = e^T P B, a 1 x m row vector.
Matrix q_mu(const Vector& e, const Matrix& p, const Matrix& b);

// v = -k_z (||W||_F + ||V||_F + Z_m) ||e||_2, broadcast over the m outputs.
Vector robust_term(const TwoLayerNet& net, double z_m, const Vector& e, double k_z);

struct ControlOutput {
  Vector u;
  Vector u_bl;
  Vector u_ad;
  Vector v;
  Vector m_r;    // N, zero when memory disabled
  Vector z;      // n_s, empty when memory disabled
  Matrix q_mu;   // 1 x m
};

ControlOutput control(const ControllerConsts& consts, const ControllerConfig& cfg,
                      const TwoLayerNet& net, const Matrix& mu, const Vector& x,
                      const Vector& x_ref);

// Flat packing of the closed-loop state for the integrator:
// [x, x_ref, W (row-major), b_w, V (row-major), b_v, mu (row-major)],
// with the mu block absent when memory is disabled.
struct LoopLayout {
  int n = 0;
  int hidden = 0;
  int m = 0;
  int n_s = 0;
  bool memory_enabled = true;

  int x_off() const { return 0; }
  int xref_off() const { return n; }
  int net_off() const { return 2 * n; }
  int net_size() const { return hidden * m + m + n * hidden + hidden; }
  int mu_off() const { return 2 * n + net_size(); }
  int size() const { return mu_off() + (memory_enabled ? hidden * n_s : 0); }
};

std::vector<double> pack_loop_state(const LoopLayout& layout, const Vector& x,
                                    const Vector& x_ref, const TwoLayerNet& net,
                                    const Matrix& mu);

struct LoopState {
  Vector x;
  Vector x_ref;
  TwoLayerNet net;
  Matrix mu;  // N x n_s, empty when memory disabled
};

LoopState unpack_loop_state(const LoopLayout& layout, std::span<const double> flat);

// Full closed-loop derivative field: plant under the assembled control law,
// autonomous reference model, NN update law, and the memory write ODE.
// Event times come from the uncertainty schedule and the command waveform.
OdeField closed_loop_field(const PlantModel& plant, const ControllerConsts& consts,
                           const ControllerConfig& cfg, const ScenarioSpec& scenario,
                           const LoopLayout& layout);

}  // namespace mannctl
