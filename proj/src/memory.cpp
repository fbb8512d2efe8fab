#include "mannctl/memory.hpp"

#include <cmath>

namespace mannctl {

Vector attention(const Matrix& mu, const Vector& q, double temperature) {
  if (q.rows() != mu.rows() || q.cols() != 1)
    throw DimensionError("attention: query shape mismatch");
  if (!(temperature > 0.0)) throw DimensionError("attention: temperature must be > 0");
  const int n_s = mu.cols();
  Vector logits(n_s, 1);
  for (int i = 0; i < n_s; ++i) {
    double acc = 0.0;
    for (int k = 0; k < mu.rows(); ++k) acc += mu(k, i) * q(k);
    logits(i) = acc / temperature;
  }
  double peak = logits(0);
  for (int i = 1; i < n_s; ++i) peak = std::max(peak, logits(i));
  Vector z(n_s, 1);
  double total = 0.0;
  for (int i = 0; i < n_s; ++i) {
    z(i) = std::exp(logits(i) - peak);
    total += z(i);
  }
  for (int i = 0; i < n_s; ++i) z(i) /= total;
  return z;
}

Vector memory_read(const Matrix& mu, const Vector& z) {
  if (z.rows() != mu.cols() || z.cols() != 1)
    throw DimensionError("memory_read: weight shape mismatch");
  return mu * z;
}

Matrix write_deriv(const MemoryState& mem, const Vector& z, const Vector& a,
                   const Matrix& w_hat, const Matrix& q_mu) {
  const int hid = mem.hidden_dim();
  const int n_s = mem.slots();
  if (z.rows() != n_s || a.rows() != hid)
    throw DimensionError("write_deriv: shape mismatch");
  if (w_hat.rows() != hid || q_mu.rows() != 1 || q_mu.cols() != w_hat.cols())
    throw DimensionError("write_deriv: W / q_mu shape mismatch");

  const Matrix error_vec = w_hat * q_mu.transpose();  // N x 1
  Matrix d(hid, n_s);
  for (int i = 0; i < n_s; ++i) {
    const double zi = z(i);
    for (int k = 0; k < hid; ++k) {
      double v = -zi * mem.mu(k, i);
      if (mem.enable_info_term) v += mem.c_w * zi * a(k);
      if (mem.enable_error_term) v += zi * error_vec(k, 0);
      d(k, i) = v;
    }
  }
  return d;
}

}  // namespace mannctl
