#include "mannctl/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace mannctl {

void Trajectory::add_channel(std::string name, std::vector<double> values) {
  if (values.size() != times.size())
    throw DimensionError("Trajectory::add_channel: length mismatch for " + name);
  channels.emplace_back(std::move(name), std::move(values));
}

const std::vector<double>* Trajectory::channel(const std::string& name) const {
  for (const auto& [n, v] : channels)
    if (n == name) return &v;
  return nullptr;
}

Trajectory integrate_segmented(const OdeField& field, std::span<const double> y0,
                               double t0, double t1, double h) {
  if (!(h > 0.0)) throw DimensionError("integrate_segmented: h must be > 0");
  if (!(t1 > t0)) throw DimensionError("integrate_segmented: empty interval");

  std::vector<double> breaks{t0};
  {
    std::vector<double> events = field.events;
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    for (double e : events)
      if (e > t0 && e < t1) breaks.push_back(e);
  }
  breaks.push_back(t1);

  const size_t n = y0.size();
  Trajectory traj;
  traj.dim = static_cast<int>(n);
  traj.times.push_back(t0);
  traj.states.assign(y0.begin(), y0.end());

  std::vector<double> y(y0.begin(), y0.end());
  std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n);

  for (size_t seg = 0; seg + 1 < breaks.size(); ++seg) {
    const double a = breaks[seg];
    const double b = breaks[seg + 1];
    const bool b_is_event = (seg + 2 < breaks.size());
    const long long steps = std::max(1LL, std::llround((b - a) / h));
    const double dt = (b - a) / static_cast<double>(steps);

    for (long long k = 0; k < steps; ++k) {
      const double ta = a + static_cast<double>(k) * dt;
      const double tb = (k == steps - 1) ? b : a + static_cast<double>(k + 1) * dt;
      const bool last = (k == steps - 1);
      // The final stage of the step closing a segment at an event is pulled
      // one ulp inside the segment: the lookup convention at events is
      // right-continuous, and the RK4 stage must see the pre-jump field.
      const double t_end = (last && b_is_event) ? std::nextafter(b, a) : tb;

      field.rhs(ta, y, k1);
      for (size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k1[i];
      field.rhs(ta + 0.5 * dt, stage, k2);
      for (size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * dt * k2[i];
      field.rhs(ta + 0.5 * dt, stage, k3);
      for (size_t i = 0; i < n; ++i) stage[i] = y[i] + dt * k3[i];
      field.rhs(t_end, stage, k4);
      for (size_t i = 0; i < n; ++i)
        y[i] = y[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

      for (size_t i = 0; i < n; ++i) {
        if (!std::isfinite(y[i])) {
          char buf[96];
          std::snprintf(buf, sizeof(buf),
                        "integrate_segmented: non-finite state component %zu at t=%.6f",
                        i, tb);
          throw NonFiniteState(buf, tb);
        }
      }
      traj.times.push_back(tb);
      traj.states.insert(traj.states.end(), y.begin(), y.end());
    }
  }
  return traj;
}

}  // namespace mannctl
