#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mannctl/errors.hpp"

namespace mannctl {

// Right-hand side writing dy/dt into `dy`. The field must be continuous in t
// on each open interval between consecutive event times; at an event time the
// lookup convention is right-continuous.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dy)>;

struct OdeField {
  OdeRhs rhs;
  std::vector<double> events;  // sorted, may be empty
};

// Uniform grid refined to contain every event time, states recorded at each
// grid point, plus named diagnostic channels appended by callers.
struct Trajectory {
  std::vector<double> times;
  int dim = 0;
  std::vector<double> states;  // row-major, steps x dim
  std::vector<std::pair<std::string, std::vector<double>>> channels;

  size_t steps() const { return times.size(); }
  std::span<const double> state_at(size_t k) const {
    return std::span<const double>(states).subspan(k * dim, dim);
  }
  void add_channel(std::string name, std::vector<double> values);
  const std::vector<double>* channel(const std::string& name) const;
};

// Classic fixed-step RK4 on each smooth segment. The grid is split exactly at
// each event time so no RK4 stage straddles a jump; a stage landing exactly on
// the right end of a segment is evaluated one ulp inside it, which realizes
// the left limit of a piecewise field while leaving smooth fields unchanged.
// Throws NonFiniteState with the offending time if the state leaves R^n.
Trajectory integrate_segmented(const OdeField& field, std::span<const double> y0,
                               double t0, double t1, double h);

}  // namespace mannctl
