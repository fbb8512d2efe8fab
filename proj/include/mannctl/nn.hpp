#pragma once

#include <span>

#include "mannctl/matrix.hpp"

namespace mannctl {

// Two-layer sigmoid network with estimated weights. Hidden layer has N
// neurons, input dimension n, output dimension m.
struct TwoLayerNet {
  Matrix w_hat;  // N x m, outer weights
  Matrix v_hat;  // n x N, hidden weights
  Vector b_w;    // m
  Vector b_v;    // N

  TwoLayerNet() = default;
  TwoLayerNet(int n, int hidden, int m)
      : w_hat(hidden, m), v_hat(n, hidden), b_w(m, 1), b_v(hidden, 1) {}

  int input_dim() const { return v_hat.rows(); }
  int hidden_dim() const { return v_hat.cols(); }
  int output_dim() const { return w_hat.cols(); }

  int flat_size() const {
    return w_hat.size() + b_w.size() + v_hat.size() + b_v.size();
  }
  void pack(std::span<double> out) const;
  void unpack(std::span<const double> in);
};

struct NnGains {
  double gamma_w = 10.0;
  double gamma_v = 10.0;
  double kappa = 0.0;
};

struct NetDeriv {
  Matrix dw;   // N x m
  Matrix dv;   // n x N
  Vector db_w; // m
  Vector db_v; // N
};

double sigmoid(double z);

// h = sigma(V^T x + b_v), every component strictly inside (0, 1).
Vector hidden(const TwoLayerNet& net, const Vector& x);

struct SigmaSignals {
  Vector sigma_hat;    // N+1, last entry exactly 1
  Matrix sigma_prime;  // (N+1) x N, last row exactly 0
};

SigmaSignals sigma_signals(const TwoLayerNet& net, const Vector& x);

// u_ad = -W^T (sigma(V^T x + b_v) + M_r) - b_w.
Vector nn_output(const TwoLayerNet& net, const Vector& x, const Vector& memory_read);

// Right-hand sides of the weight update law. q_mu is a 1 x m row vector,
// e_norm the tracking-error norm feeding the kappa leakage terms. The outer
// block stacks b_w^T as the last row, pairing with the trailing 1 of
// sigma_hat; the hidden block stacks b_v^T likewise.
NetDeriv update_derivs(const TwoLayerNet& net, const NnGains& gains, const Vector& x,
                       const Matrix& q_mu, double e_norm);

}  // namespace mannctl
