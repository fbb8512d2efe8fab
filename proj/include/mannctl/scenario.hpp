#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mannctl/matrix.hpp"
#include "mannctl/nn.hpp"

namespace mannctl {

struct PlantModel {
  Matrix a;    // n x n
  Matrix b;    // n x m
  Matrix b_r;  // n x 1
  std::vector<std::string> state_labels;

  int state_dim() const { return a.rows(); }
  int control_dim() const { return b.cols(); }
};

// Longitudinal dynamics of a B-747 at 0.8 Mach / 6000 m, with an appended
// command-error integrator. State is [e_I, alpha, q].
PlantModel b747_plant();

enum class SqMode {
  kNormSq,   // ||x||_2^2
  kAlphaSq,  // alpha^2 (angle-of-attack channel squared)
};

struct UncertaintyJump {
  double time = 0.0;
  // C_f <- scale * C_f, plus xnorm_mult * ||x||_2 when xnorm_mult != 0
  // (the non-affine switches replace C_f by a multiple of ||x||).
  double scale = 1.0;
  double xnorm_mult = 0.0;
};

struct UncertaintySchedule {
  int example_id = 0;  // 1..4, or 0 for custom
  double c_f0 = 0.1;
  std::vector<UncertaintyJump> jumps;  // strictly increasing times
  bool additive_form = false;          // false: f = C_f sq(x); true: f = sq(x) + 0.1 C_f
  SqMode sq_mode = SqMode::kNormSq;
  int control_dim = 1;

  static UncertaintySchedule for_example(int id);
  static UncertaintySchedule none();  // f identically zero
  std::vector<double> jump_times() const;
};

double sq_value(SqMode mode, const Vector& x);

// Matched uncertainty f(t, x) broadcast over the control channels.
// Right-continuous at each jump time.
Vector uncertainty(const UncertaintySchedule& schedule, double t, const Vector& x);

enum class CommandKind { kStep, kSquare, kSine, kConstant };

struct CommandSpec {
  CommandKind kind = CommandKind::kStep;
  double amplitude = 0.017453292519943295;  // 1 degree in radians
  double period = 10.0;
  double phase = 0.0;

  // Interior discontinuities of the waveform on (t0, t1), for event-aware
  // integration.
  std::vector<double> breakpoints(double t0, double t1) const;
};

double command(const CommandSpec& spec, double t);

struct NetDims {
  int n = 3;
  int hidden = 4;
  int m = 1;
  int n_s = 1;
};

struct InitWeights {
  TwoLayerNet net;
  Matrix mu;  // N x n_s
};

// Outer weights zero; hidden weights, hidden biases and memory slots i.i.d.
// uniform on [0,1) from a SplitMix64 stream, drawn in the order
// V (row-major), b_v, mu (row-major).
InitWeights init_weights(const NetDims& dims, uint64_t seed);

// Smallest N' whose plain-NN parameter count matches or exceeds the MANN
// count (n+1)N + (N+1)m + n_s N.
int equal_param_n(int hidden, int n, int m, int n_s);

struct ScenarioSpec {
  std::string name;
  UncertaintySchedule schedule;
  CommandSpec command;
  double horizon = 50.0;
  double step = 1e-3;
  int default_hidden = 4;

  static ScenarioSpec by_name(const std::string& name);
  static std::vector<std::string> preset_names();
};

}  // namespace mannctl
