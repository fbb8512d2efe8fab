#include "mannctl/nn.hpp"

#include <cmath>

namespace mannctl {
namespace {

void pack_matrix(const Matrix& m, std::span<double>& out) {
  auto src = m.data();
  std::copy(src.begin(), src.end(), out.begin());
  out = out.subspan(src.size());
}

void unpack_matrix(Matrix& m, std::span<const double>& in) {
  auto dst = m.data();
  std::copy(in.begin(), in.begin() + dst.size(), dst.begin());
  in = in.subspan(dst.size());
}

}  // namespace

void TwoLayerNet::pack(std::span<double> out) const {
  if (static_cast<int>(out.size()) != flat_size())
    throw DimensionError("TwoLayerNet::pack: span size mismatch");
  pack_matrix(w_hat, out);
  pack_matrix(b_w, out);
  pack_matrix(v_hat, out);
  pack_matrix(b_v, out);
}

void TwoLayerNet::unpack(std::span<const double> in) {
  if (static_cast<int>(in.size()) != flat_size())
    throw DimensionError("TwoLayerNet::unpack: span size mismatch");
  unpack_matrix(w_hat, in);
  unpack_matrix(b_w, in);
  unpack_matrix(v_hat, in);
  unpack_matrix(b_v, in);
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

Vector hidden(const TwoLayerNet& net, const Vector& x) {
  if (x.rows() != net.input_dim() || x.cols() != 1)
    throw DimensionError("hidden: input shape mismatch");
  Vector pre = net.v_hat.transpose() * x + net.b_v;
  Vector h(net.hidden_dim(), 1);
  for (int i = 0; i < h.rows(); ++i) h(i) = sigmoid(pre(i));
  return h;
}

SigmaSignals sigma_signals(const TwoLayerNet& net, const Vector& x) {
  const int hid = net.hidden_dim();
  const Vector h = hidden(net, x);
  SigmaSignals s;
  s.sigma_hat = Vector(hid + 1, 1);
  for (int i = 0; i < hid; ++i) s.sigma_hat(i) = h(i);
  s.sigma_hat(hid) = 1.0;
  s.sigma_prime = Matrix(hid + 1, hid);
  for (int i = 0; i < hid; ++i) s.sigma_prime(i, i) = h(i) * (1.0 - h(i));
  return s;
}

Vector nn_output(const TwoLayerNet& net, const Vector& x, const Vector& memory_read) {
  if (memory_read.rows() != net.hidden_dim() || memory_read.cols() != 1)
    throw DimensionError("nn_output: memory read shape mismatch");
  const Vector h = hidden(net, x);
  return -(net.w_hat.transpose() * (h + memory_read)) - net.b_w;
}

NetDeriv update_derivs(const TwoLayerNet& net, const NnGains& gains, const Vector& x,
                       const Matrix& q_mu, double e_norm) {
  const int n = net.input_dim();
  const int hid = net.hidden_dim();
  const int m = net.output_dim();
  if (q_mu.rows() != 1 || q_mu.cols() != m)
    throw DimensionError("update_derivs: q_mu must be 1 x m");

  const SigmaSignals sig = sigma_signals(net, x);
  const Vector pre = net.v_hat.transpose() * x + net.b_v;

  // Stacked weights with the bias transposes as last rows.
  Matrix w_stack(hid + 1, m);
  for (int i = 0; i < hid; ++i)
    for (int j = 0; j < m; ++j) w_stack(i, j) = net.w_hat(i, j);
  for (int j = 0; j < m; ++j) w_stack(hid, j) = net.b_w(j);

  Matrix v_stack(n + 1, hid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < hid; ++j) v_stack(i, j) = net.v_hat(i, j);
  for (int j = 0; j < hid; ++j) v_stack(n, j) = net.b_v(j);

  Vector x_e(n + 1, 1);
  for (int i = 0; i < n; ++i) x_e(i) = x(i);
  x_e(n) = 1.0;

  const Matrix dw_stack = gains.gamma_w * ((sig.sigma_hat - sig.sigma_prime * pre) * q_mu) -
                          (gains.kappa * gains.gamma_w * e_norm) * w_stack;
  const Matrix dv_stack =
      gains.gamma_v * (((x_e * q_mu) * w_stack.transpose()) * sig.sigma_prime) -
      (gains.kappa * gains.gamma_v * e_norm) * v_stack;

  NetDeriv d;
  d.dw = Matrix(hid, m);
  d.db_w = Vector(m, 1);
  for (int i = 0; i < hid; ++i)
    for (int j = 0; j < m; ++j) d.dw(i, j) = dw_stack(i, j);
  for (int j = 0; j < m; ++j) d.db_w(j) = dw_stack(hid, j);

  d.dv = Matrix(n, hid);
  d.db_v = Vector(hid, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < hid; ++j) d.dv(i, j) = dv_stack(i, j);
  for (int j = 0; j < hid; ++j) d.db_v(j) = dv_stack(n, j);
  return d;
}

}  // namespace mannctl
