#include "mannctl/estimation.hpp"

#include <algorithm>
#include <cmath>

#include "mannctl/memory.hpp"
#include "mannctl/nn.hpp"
#include "mannctl/rng.hpp"

namespace mannctl {
namespace {

Vector sigmoid_vec(const Matrix& v, const Vector& x) {
  Vector pre = v.transpose() * x;
  Vector h(pre.rows(), 1);
  for (int i = 0; i < h.rows(); ++i) h(i) = sigmoid(pre(i));
  return h;
}

double true_output(const TrueFunction& fn, const Matrix& v, const Vector& x, double delta) {
  const Vector sig = sigmoid_vec(v, x);
  return dot(fn.w, sig) + delta;
}

struct FullLayout {
  int n, hid, n_s;
  int w_off() const { return 0; }
  int v_off() const { return hid; }
  int wm_off() const { return hid + n * hid; }
  int vm_off() const { return 2 * hid + n * hid; }
  int mu_off() const { return 2 * hid + 2 * n * hid; }
  int size() const { return 2 * hid + 2 * n * hid + hid * n_s; }
};

Matrix read_mat(std::span<const double> y, int off, int rows, int cols) {
  Matrix m(rows, cols);
  auto d = m.data();
  std::copy(y.begin() + off, y.begin() + off + rows * cols, d.begin());
  return m;
}

void write_mat(std::span<double> y, int off, const Matrix& m) {
  auto d = m.data();
  std::copy(d.begin(), d.end(), y.begin() + off);
}

struct FullOutputs {
  double e;
  double e_m;
  Vector sigma_hat;    // plain hidden output
  Vector sigma_hat_m;  // memory-estimator hidden output
  Vector z;
  Vector m_r;
  double mr_dev;
};

FullOutputs full_outputs(const EstimationSetup& s, double t, std::span<const double> y,
                         const FullLayout& lay) {
  const Vector x = s.x_at(t);
  const double delta = s.delta_at(t);
  const double y_true = true_output(s.fn, s.v_at(t), x, delta);

  FullOutputs o;
  const Matrix w_hat = read_mat(y, lay.w_off(), lay.hid, 1);
  const Matrix v_hat = read_mat(y, lay.v_off(), lay.n, lay.hid);
  const Matrix w_m = read_mat(y, lay.wm_off(), lay.hid, 1);
  const Matrix v_m = read_mat(y, lay.vm_off(), lay.n, lay.hid);
  const Matrix mu = read_mat(y, lay.mu_off(), lay.hid, lay.n_s);

  o.sigma_hat = sigmoid_vec(v_hat, x);
  o.e = y_true - dot(w_hat, o.sigma_hat);

  o.sigma_hat_m = sigmoid_vec(v_m, x);
  o.z = attention(mu, o.sigma_hat_m);
  o.m_r = memory_read(mu, o.z);
  o.e_m = y_true - dot(w_m, o.sigma_hat_m + s.init.alpha * o.m_r);
  o.mr_dev = (o.m_r - o.sigma_hat_m).norm2();
  return o;
}

}  // namespace

void check_irreducible(const TrueFunction& fn) {
  const int hid = fn.v0.cols();
  for (int i = 0; i < fn.w.size(); ++i)
    if (fn.w(i) == 0.0) throw NotIrreducible("true network has a vanishing outer weight");
  for (int j = 0; j < hid; ++j)
    if (fn.v0.col(j).norm2() == 0.0)
      throw NotIrreducible("true network has a zero hidden column");
  for (int i = 0; i < hid; ++i)
    for (int j = i + 1; j < hid; ++j)
      if ((fn.v0.col(i) - fn.v0.col(j)).norm2() == 0.0)
        throw NotIrreducible("true network has duplicated hidden columns");
}

PlainEstimate plain_estimate(const Matrix& w_hat, const Matrix& v_hat, const Vector& x,
                             double y) {
  const Vector sig = sigmoid_vec(v_hat, x);
  PlainEstimate p;
  p.y_hat = dot(w_hat, sig);
  p.error = y - p.y_hat;
  return p;
}

MemEstimate mem_estimate(const Matrix& w_hat_m, const Matrix& v_hat_m, const Vector& x,
                         const Matrix& mu, double alpha, double y) {
  const Vector sig = sigmoid_vec(v_hat_m, x);
  MemEstimate e;
  const Vector z = attention(mu, sig);
  e.m_r = memory_read(mu, z);
  e.y_hat = dot(w_hat_m, sig + alpha * e.m_r);
  e.error = y - e.y_hat;
  return e;
}

EstimatorState equivalent_init(const TrueFunction& fn, const Vector& x0, double alpha,
                               int n_s) {
  check_irreducible(fn);
  if (!(alpha > 0.0) || alpha > 1.0)
    throw ConfigError("equivalent_init: alpha must be in (0, 1]");
  if (n_s < 1) throw ConfigError("equivalent_init: n_s must be >= 1");
  EstimatorState st;
  st.alpha = alpha;
  st.w_hat = fn.w;
  st.v_hat = fn.v0;
  st.w_hat_m = (1.0 / (1.0 + alpha)) * fn.w;
  st.v_hat_m = fn.v0;
  const Vector h0 = sigmoid_vec(fn.v0, x0);
  st.mu = Matrix(h0.rows(), n_s);
  for (int j = 0; j < n_s; ++j) st.mu.set_col(j, h0);
  return st;
}

Matrix EstimationSetup::v_at(double t) const {
  const double progress =
      std::clamp(t - cfg.t_jump, 0.0, cfg.ramp_duration);
  return fn.v0 + progress * v_rate;
}

Vector EstimationSetup::x_at(double t) const { return x0 + (cfg.eps * t) * d_s; }

double EstimationSetup::delta_at(double t) const {
  return fn.delta_bar * std::sin(fn.delta_omega * t);
}

std::vector<double> EstimationSetup::events() const {
  return {cfg.t_jump, cfg.t_jump + cfg.ramp_duration};
}

EstimationSetup make_setup(const EstimationConfig& cfg) {
  if (cfg.hidden < 2) throw ConfigError("estimation: N >= 2 required for memory runs");
  if (!(cfg.eps > 0.0) || cfg.eps >= 1.0)
    throw ConfigError("estimation: eps must lie in (0, 1)");
  EstimationSetup s;
  s.cfg = cfg;
  SplitMix64 rng(cfg.seed);

  s.fn.w = Matrix(cfg.hidden, 1);
  for (int i = 0; i < cfg.hidden; ++i) s.fn.w(i) = rng.uniform(0.25, 1.0);
  if (cfg.w_norm > 0.0) {
    const double scale = cfg.w_norm / s.fn.w.norm2();
    s.fn.w *= scale;
  }
  s.fn.v0 = Matrix(cfg.n, cfg.hidden);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.hidden; ++j) s.fn.v0(i, j) = rng.uniform();
  s.fn.delta_bar = cfg.delta_bar;
  s.fn.delta_omega = cfg.delta_omega;

  s.x0 = Vector(cfg.n, 1);
  for (int i = 0; i < cfg.n; ++i) s.x0(i) = rng.uniform();
  s.d_s = Vector(cfg.n, 1);
  for (int i = 0; i < cfg.n; ++i) s.d_s(i) = rng.uniform(-1.0, 1.0);
  s.v_rate = Matrix(cfg.n, cfg.hidden);
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.hidden; ++j)
      s.v_rate(i, j) = rng.uniform(-cfg.pulse_mag, cfg.pulse_mag);

  check_irreducible(s.fn);
  s.init = equivalent_init(s.fn, s.x0, cfg.alpha, cfg.n_s);
  return s;
}

EstimationTraces run_two_timescale(const EstimationSetup& setup) {
  const auto& cfg = setup.cfg;
  FullLayout lay{cfg.n, cfg.hidden, cfg.n_s};

  std::vector<double> y0(lay.size());
  write_mat(y0, lay.w_off(), setup.init.w_hat);
  write_mat(y0, lay.v_off(), setup.init.v_hat);
  write_mat(y0, lay.wm_off(), setup.init.w_hat_m);
  write_mat(y0, lay.vm_off(), setup.init.v_hat_m);
  write_mat(y0, lay.mu_off(), setup.init.mu);

  OdeField field;
  field.events = setup.events();
  field.rhs = [&setup, lay](double t, std::span<const double> y, std::span<double> dy) {
    const auto& cfg = setup.cfg;
    const FullOutputs o = full_outputs(setup, t, y, lay);
    const Vector x = setup.x_at(t);

    const Matrix w_hat = read_mat(y, lay.w_off(), lay.hid, 1);
    const Matrix v_hat = read_mat(y, lay.v_off(), lay.n, lay.hid);
    const Matrix w_m = read_mat(y, lay.wm_off(), lay.hid, 1);
    const Matrix mu = read_mat(y, lay.mu_off(), lay.hid, lay.n_s);

    // Slow gradient-flow updates, eps-scaled.
    const Matrix dw = (cfg.eps * cfg.gamma * o.e) * o.sigma_hat;
    Matrix grad_row(1, lay.hid);
    for (int i = 0; i < lay.hid; ++i)
      grad_row(0, i) = w_hat(i) * (o.sigma_hat(i) * (1.0 - o.sigma_hat(i)));
    const Matrix dv = (cfg.eps * cfg.gamma * o.e) * (x * grad_row);

    const Matrix dw_m = (cfg.eps * cfg.gamma * o.e_m) * o.sigma_hat_m;
    Matrix grad_row_m(1, lay.hid);
    for (int i = 0; i < lay.hid; ++i)
      grad_row_m(0, i) = w_m(i) * (o.sigma_hat_m(i) * (1.0 - o.sigma_hat_m(i)));
    const Matrix dv_m = (cfg.eps * cfg.gamma * o.e_m) * (x * grad_row_m);

    // Fast memory write ODE, unscaled; the error-driven term carries W_m e_m.
    MemoryState mem;
    mem.mu = mu;
    mem.c_w = cfg.c_w;
    const Matrix e_m_row = Matrix::from_rows({{o.e_m}});
    const Matrix dmu = write_deriv(mem, o.z, o.sigma_hat_m, w_m, e_m_row);

    write_mat(dy, lay.w_off(), dw);
    write_mat(dy, lay.v_off(), dv);
    write_mat(dy, lay.wm_off(), dw_m);
    write_mat(dy, lay.vm_off(), dv_m);
    write_mat(dy, lay.mu_off(), dmu);
  };

  const Trajectory traj = integrate_segmented(field, y0, 0.0, cfg.horizon, cfg.step);

  EstimationTraces tr;
  tr.times = traj.times;
  tr.e.reserve(traj.steps());
  tr.e_m.reserve(traj.steps());
  tr.delta.reserve(traj.steps());
  tr.mr_dev.reserve(traj.steps());
  for (size_t k = 0; k < traj.steps(); ++k) {
    const FullOutputs o = full_outputs(setup, traj.times[k], traj.state_at(k), lay);
    tr.e.push_back(o.e);
    tr.e_m.push_back(o.e_m);
    tr.delta.push_back(setup.delta_at(traj.times[k]));
    tr.mr_dev.push_back(o.mr_dev);
    tr.max_abs_e = std::max(tr.max_abs_e, std::abs(o.e));
    tr.max_abs_e_m = std::max(tr.max_abs_e_m, std::abs(o.e_m));
  }
  return tr;
}

BoundaryLayerRun boundary_layer_run(const EstimationSetup& setup) {
  const auto& cfg = setup.cfg;
  const int hid = cfg.hidden;

  // Frozen slow states.
  const Vector x0 = setup.x0;
  const Matrix w_hat0 = setup.init.w_hat;
  const Matrix v_hat0 = setup.init.v_hat;
  const Matrix w_m0 = setup.init.w_hat_m;
  const Matrix v_m0 = setup.init.v_hat_m;
  const Vector sigma_hat0 = sigmoid_vec(v_hat0, x0);
  const Vector sigma_m0 = sigmoid_vec(v_m0, x0);
  const double y_hat_plain = dot(w_hat0, sigma_hat0);

  auto bl_errors = [&](double t, const Matrix& mu, double* e_bl, double* e_m_bl,
                       double* mr_dev) {
    const double delta = setup.delta_at(t);
    const Vector sigma_bl = sigmoid_vec(setup.v_at(t), x0);
    const double y_true = dot(setup.fn.w, sigma_bl) + delta;
    *e_bl = y_true - y_hat_plain;
    const Vector z = attention(mu, sigma_m0);
    const Vector m_r = memory_read(mu, z);
    *e_m_bl = y_true - dot(w_m0, sigma_m0 + cfg.alpha * m_r);
    *mr_dev = (m_r - sigma_bl).norm2();
  };

  OdeField field;
  field.events = setup.events();
  field.rhs = [&](double t, std::span<const double> y, std::span<double> dy) {
    const Matrix mu = read_mat(y, 0, hid, cfg.n_s);
    double e_bl, e_m_bl, mr_dev;
    bl_errors(t, mu, &e_bl, &e_m_bl, &mr_dev);
    MemoryState mem;
    mem.mu = mu;
    mem.c_w = cfg.c_w;
    const Vector z = attention(mu, sigma_m0);
    const Matrix dmu =
        write_deriv(mem, z, sigma_m0, w_m0, Matrix::from_rows({{e_m_bl}}));
    write_mat(dy, 0, dmu);
  };

  std::vector<double> y0(static_cast<size_t>(hid) * cfg.n_s);
  write_mat(y0, 0, setup.init.mu);
  const Trajectory traj = integrate_segmented(field, y0, 0.0, cfg.horizon, cfg.step);

  BoundaryLayerRun run;
  run.times = traj.times;
  for (size_t k = 0; k < traj.steps(); ++k) {
    const Matrix mu = read_mat(traj.state_at(k), 0, hid, cfg.n_s);
    double e_bl, e_m_bl, mr_dev;
    bl_errors(traj.times[k], mu, &e_bl, &e_m_bl, &mr_dev);
    run.e_bl.push_back(e_bl);
    run.e_m_bl.push_back(e_m_bl);
    run.mr_dev_bl.push_back(mr_dev);
    run.e_bl_max = std::max(run.e_bl_max, std::abs(e_bl));
    run.delta_m_est = std::max(run.delta_m_est, mr_dev);
  }
  return run;
}

Theorem1Report theorem1_check(const EstimationTraces& traces, double alpha,
                              double delta_bar, double delta_m_est, double e_bl_max,
                              double slack_c) {
  Theorem1Report r;
  r.max_abs_e_m = traces.max_abs_e_m;
  r.e_bl_max = e_bl_max;
  r.delta_m_est = delta_m_est;
  r.bound = e_bl_max / (1.0 + alpha) + slack_c * alpha * (delta_bar + delta_m_est);
  r.ratio = e_bl_max > 0.0 ? r.max_abs_e_m / e_bl_max
                           : (r.max_abs_e_m > 0.0 ? std::numeric_limits<double>::infinity()
                                                  : 0.0);
  r.pass = r.max_abs_e_m <= r.bound;
  return r;
}

Theorem1Report run_theorem1_experiment(const EstimationConfig& cfg) {
  const EstimationSetup setup = make_setup(cfg);
  const EstimationTraces traces = run_two_timescale(setup);
  const BoundaryLayerRun bl = boundary_layer_run(setup);
  return theorem1_check(traces, cfg.alpha, cfg.delta_bar, bl.delta_m_est, bl.e_bl_max,
                        cfg.slack_c);
}

}  // namespace mannctl
