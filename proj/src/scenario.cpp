#include "mannctl/scenario.hpp"

#include <cmath>

#include "mannctl/rng.hpp"

namespace mannctl {

PlantModel b747_plant() {
  PlantModel p;
  p.a = Matrix::from_rows({{0.0, 1.0, 0.0},
                           {0.0, -0.32, 0.86},
                           {0.0, -0.93, -0.43}});
  p.b = Matrix::from_rows({{0.0}, {-0.02}, {-1.16}});
  p.b_r = Matrix::from_rows({{-1.0}, {0.0}, {0.0}});
  p.state_labels = {"e_I", "alpha", "q"};
  return p;
}

UncertaintySchedule UncertaintySchedule::for_example(int id) {
  UncertaintySchedule s;
  s.example_id = id;
  s.c_f0 = 0.1;
  switch (id) {
    case 1:
      s.additive_form = false;
      s.jumps = {{5.0, 50.0, 0.0}, {25.0, 2.0, 0.0}};
      break;
    case 2:
      s.additive_form = true;
      s.jumps = {{5.0, 10.0, 0.0}, {25.0, 2.0, 0.0}};
      break;
    case 3:
      s.additive_form = true;
      s.jumps = {{5.0, 100.0, 0.0}, {25.0, 2.0, 0.0}};
      break;
    case 4:
      s.additive_form = true;
      s.jumps = {{5.0, 0.0, 1.0}, {25.0, 0.0, 10.0}};
      break;
    default:
      throw ConfigError("UncertaintySchedule::for_example: id must be 1..4");
  }
  return s;
}

UncertaintySchedule UncertaintySchedule::none() {
  UncertaintySchedule s;
  s.example_id = 0;
  s.c_f0 = 0.0;
  s.additive_form = false;  // f = C_f sq(x) with C_f = 0, identically zero
  return s;
}

std::vector<double> UncertaintySchedule::jump_times() const {
  std::vector<double> t;
  t.reserve(jumps.size());
  for (const auto& j : jumps) t.push_back(j.time);
  return t;
}

double sq_value(SqMode mode, const Vector& x) {
  if (mode == SqMode::kAlphaSq) {
    const double alpha = x(1);
    return alpha * alpha;
  }
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) acc += x(i) * x(i);
  return acc;
}

Vector uncertainty(const UncertaintySchedule& schedule, double t, const Vector& x) {
  double c_f = schedule.c_f0;
  for (const auto& jump : schedule.jumps) {
    if (t < jump.time) break;
    if (jump.xnorm_mult != 0.0)
      c_f = jump.xnorm_mult * x.norm2();
    else
      c_f = jump.scale * c_f;
  }
  const double sq = sq_value(schedule.sq_mode, x);
  const double f = schedule.additive_form ? sq + 0.1 * c_f : c_f * sq;
  Vector out(schedule.control_dim, 1);
  for (int i = 0; i < out.size(); ++i) out(i) = f;
  return out;
}

std::vector<double> CommandSpec::breakpoints(double t0, double t1) const {
  std::vector<double> pts;
  if (kind != CommandKind::kSquare || period <= 0.0) return pts;
  const double half = period / 2.0;
  long long k = static_cast<long long>(std::floor((t0 - phase) / half));
  for (;; ++k) {
    const double t = phase + static_cast<double>(k) * half;
    if (t >= t1) break;
    if (t > t0) pts.push_back(t);
  }
  return pts;
}

double command(const CommandSpec& spec, double t) {
  switch (spec.kind) {
    case CommandKind::kConstant:
      return spec.amplitude;
    case CommandKind::kStep:
      return t >= 0.0 ? spec.amplitude : 0.0;
    case CommandKind::kSine:
      return spec.amplitude * std::sin(2.0 * M_PI * (t - spec.phase) / spec.period);
    case CommandKind::kSquare: {
      const double u = (t - spec.phase) / spec.period;
      const double frac = u - std::floor(u);
      return frac < 0.5 ? spec.amplitude : -spec.amplitude;  // right-continuous
    }
  }
  return 0.0;
}

InitWeights init_weights(const NetDims& dims, uint64_t seed) {
  InitWeights w;
  w.net = TwoLayerNet(dims.n, dims.hidden, dims.m);
  SplitMix64 rng(seed);
  for (int i = 0; i < dims.n; ++i)
    for (int j = 0; j < dims.hidden; ++j) w.net.v_hat(i, j) = rng.uniform();
  for (int i = 0; i < dims.hidden; ++i) w.net.b_v(i) = rng.uniform();
  w.mu = Matrix(dims.hidden, dims.n_s);
  for (int i = 0; i < dims.hidden; ++i)
    for (int j = 0; j < dims.n_s; ++j) w.mu(i, j) = rng.uniform();
  return w;
}

int equal_param_n(int hidden, int n, int m, int n_s) {
  if (hidden < 1 || n < 1 || m < 1 || n_s < 0)
    throw ConfigError("equal_param_n: dimensions must be positive");
  const int mann_count = (n + 1) * hidden + (hidden + 1) * m + n_s * hidden;
  int np = hidden;
  while ((n + 1) * np + (np + 1) * m < mann_count) ++np;
  return np;
}

ScenarioSpec ScenarioSpec::by_name(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "b747-ex1" || name == "b747-ex2" || name == "b747-ex3" ||
      name == "b747-ex4") {
    const int id = name.back() - '0';
    s.schedule = UncertaintySchedule::for_example(id);
    s.default_hidden = (id == 2) ? 5 : 4;
  } else if (name == "b747-nominal") {
    s.schedule = UncertaintySchedule::none();
    s.default_hidden = 4;
  } else {
    throw ConfigError("unknown scenario: " + name);
  }
  return s;
}

std::vector<std::string> ScenarioSpec::preset_names() {
  return {"b747-ex1", "b747-ex2", "b747-ex3", "b747-ex4", "b747-nominal"};
}

}  // namespace mannctl
