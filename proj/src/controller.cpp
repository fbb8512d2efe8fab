#include "mannctl/controller.hpp"

#include <cmath>

#include "mannctl/numerics.hpp"

namespace mannctl {

NnGains theorem_gains(double k_v) {
  NnGains g;
  g.gamma_w = k_v;
  g.gamma_v = k_v;
  g.kappa = std::pow(k_v, 0.75);
  return g;
}

ControllerConsts build_controller(const PlantModel& plant, const ControllerConfig& cfg) {
  if (!(cfg.k_v > 0.0) || !(cfg.k_r > 0.0))
    throw ConfigError("build_controller: K_v and K_r must be > 0");
  if (cfg.lyapunov_rhs_factor != 1 && cfg.lyapunov_rhs_factor != 2)
    throw ConfigError("build_controller: lyapunov_rhs_factor must be 1 or 2");
  const int n = plant.state_dim();
  const int m = plant.control_dim();
  ControllerConsts c;
  c.p_care = solve_care(plant.a, plant.b, cfg.k_v * Matrix::identity(n),
                        cfg.k_r * Matrix::identity(m));
  c.k_lqr = lqr_gain(c.p_care, plant.b, cfg.k_r * Matrix::identity(m));
  c.a_ref = plant.a - plant.b * c.k_lqr;
  c.p = solve_lyapunov(c.a_ref,
                       (cfg.lyapunov_rhs_factor * cfg.k_v) * Matrix::identity(n));
  c.b = plant.b;
  return c;
}

Matrix q_mu(const Vector& e, const Matrix& p, const Matrix& b) {
  return e.transpose() * p * b;
}

Vector robust_term(const TwoLayerNet& net, double z_m, const Vector& e, double k_z) {
  if (k_z < 0.0) throw ConfigError("robust_term: k_z must be >= 0");
  const double scale =
      -(k_z * (net.w_hat.frobenius_norm() + net.v_hat.frobenius_norm() + z_m) *
        e.norm2());
  Vector v(net.output_dim(), 1);
  for (int i = 0; i < v.size(); ++i) v(i) = scale;
  return v;
}

ControlOutput control(const ControllerConsts& consts, const ControllerConfig& cfg,
                      const TwoLayerNet& net, const Matrix& mu, const Vector& x,
                      const Vector& x_ref) {
  ControlOutput out;
  const Vector e = x - x_ref;
  out.q_mu = q_mu(e, consts.p, consts.b);
  out.u_bl = -(consts.k_lqr * x);
  const Vector h = hidden(net, x);  // write vector and query alike
  if (cfg.memory_enabled) {
    out.z = attention(mu, h, cfg.softmax_temperature);
    out.m_r = memory_read(mu, out.z);
  } else {
    out.z = Vector();
    out.m_r = Vector(net.hidden_dim(), 1);
  }
  out.u_ad = nn_output(net, x, out.m_r);
  out.v = robust_term(net, cfg.z_m, e, cfg.k_z);
  out.u = out.u_bl + out.u_ad + out.v;
  return out;
}

std::vector<double> pack_loop_state(const LoopLayout& layout, const Vector& x,
                                    const Vector& x_ref, const TwoLayerNet& net,
                                    const Matrix& mu) {
  std::vector<double> flat(layout.size());
  std::span<double> s(flat);
  for (int i = 0; i < layout.n; ++i) s[layout.x_off() + i] = x(i);
  for (int i = 0; i < layout.n; ++i) s[layout.xref_off() + i] = x_ref(i);
  net.pack(s.subspan(layout.net_off(), layout.net_size()));
  if (layout.memory_enabled) {
    auto dst = s.subspan(layout.mu_off(), layout.hidden * layout.n_s);
    auto src = mu.data();
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return flat;
}

LoopState unpack_loop_state(const LoopLayout& layout, std::span<const double> flat) {
  if (static_cast<int>(flat.size()) != layout.size())
    throw DimensionError("unpack_loop_state: size mismatch");
  LoopState st;
  st.x = Vector(layout.n, 1);
  st.x_ref = Vector(layout.n, 1);
  for (int i = 0; i < layout.n; ++i) st.x(i) = flat[layout.x_off() + i];
  for (int i = 0; i < layout.n; ++i) st.x_ref(i) = flat[layout.xref_off() + i];
  st.net = TwoLayerNet(layout.n, layout.hidden, layout.m);
  st.net.unpack(flat.subspan(layout.net_off(), layout.net_size()));
  if (layout.memory_enabled) {
    st.mu = Matrix(layout.hidden, layout.n_s);
    auto dst = st.mu.data();
    auto src = flat.subspan(layout.mu_off(), layout.hidden * layout.n_s);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return st;
}

OdeField closed_loop_field(const PlantModel& plant, const ControllerConsts& consts,
                           const ControllerConfig& cfg, const ScenarioSpec& scenario,
                           const LoopLayout& layout) {
  OdeField field;
  field.events = scenario.schedule.jump_times();
  for (double t : scenario.command.breakpoints(0.0, scenario.horizon))
    field.events.push_back(t);

  const UncertaintySchedule schedule = scenario.schedule;
  const CommandSpec cmd = scenario.command;
  field.rhs = [plant, consts, cfg, schedule, cmd, layout](
                  double t, std::span<const double> y, std::span<double> dy) {
    LoopState st = unpack_loop_state(layout, y);
    const Vector e = st.x - st.x_ref;
    const double e_norm = e.norm2();
    const Matrix q = q_mu(e, consts.p, consts.b);

    const Vector h = hidden(st.net, st.x);
    Vector m_r(layout.hidden, 1);
    Vector z;
    if (cfg.memory_enabled) {
      z = attention(st.mu, h, cfg.softmax_temperature);
      m_r = memory_read(st.mu, z);
    }
    const Vector u_ad = nn_output(st.net, st.x, m_r);
    const Vector u_bl = -(consts.k_lqr * st.x);
    const Vector v = robust_term(st.net, cfg.z_m, e, cfg.k_z);
    const Vector u = u_bl + u_ad + v;

    const double s = command(cmd, t);
    const Vector f = uncertainty(schedule, t, st.x);
    const Vector x_dot = plant.a * st.x + plant.b * (u + f) + plant.b_r * s;
    const Vector xref_dot = consts.a_ref * st.x_ref + plant.b_r * s;

    const NetDeriv nd = update_derivs(st.net, cfg.gains, st.x, q, e_norm);

    for (int i = 0; i < layout.n; ++i) dy[layout.x_off() + i] = x_dot(i);
    for (int i = 0; i < layout.n; ++i) dy[layout.xref_off() + i] = xref_dot(i);
    TwoLayerNet deriv_net(layout.n, layout.hidden, layout.m);
    deriv_net.w_hat = nd.dw;
    deriv_net.b_w = nd.db_w;
    deriv_net.v_hat = nd.dv;
    deriv_net.b_v = nd.db_v;
    deriv_net.pack(dy.subspan(layout.net_off(), layout.net_size()));

    if (cfg.memory_enabled) {
      MemoryState mem;
      mem.mu = st.mu;
      mem.c_w = cfg.c_w;
      mem.enable_info_term = cfg.enable_info_term;
      mem.enable_error_term = cfg.enable_error_term;
      const Matrix mu_dot = write_deriv(mem, z, h, st.net.w_hat, q);
      auto dst = dy.subspan(layout.mu_off(), layout.hidden * layout.n_s);
      auto src = mu_dot.data();
      std::copy(src.begin(), src.end(), dst.begin());
    }
  };
  return field;
}

}  // namespace mannctl
