#pragma once

#include "mannctl/matrix.hpp"

namespace mannctl {

// External working memory. Columns of mu are the slot values and double as
// the keys; a single content-addressed head reads a convex combination of
// slots and writes through a forget / new-information / error-driven ODE.
struct MemoryState {
  Matrix mu;  // N x n_s
  double c_w = 0.75;
  bool enable_info_term = true;   // c_w z_i a
  bool enable_error_term = true;  // z_i W q_mu^T
  double temperature = 1.0;       // softmax logit scale, 1 = raw dot products

  int hidden_dim() const { return mu.rows(); }
  int slots() const { return mu.cols(); }
};

// z = softmax(mu^T q / temperature), overflow-stable.
Vector attention(const Matrix& mu, const Vector& q, double temperature = 1.0);

// M_r = mu z.
Vector memory_read(const Matrix& mu, const Vector& z);

// Per column i: dmu_i = -z_i mu_i [+ c_w z_i a] [+ z_i W q_mu^T], with the
// bracketed terms gated by the ablation flags.
Matrix write_deriv(const MemoryState& mem, const Vector& z, const Vector& a,
                   const Matrix& w_hat, const Matrix& q_mu);

}  // namespace mannctl
