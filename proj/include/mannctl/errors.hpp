#pragma once

#include <stdexcept>
#include <string>

namespace mannctl {

// Shape mismatches are programming errors, not recoverable conditions.
struct DimensionError : std::logic_error {
  explicit DimensionError(const std::string& what) : std::logic_error(what) {}
};

struct NotHurwitz : std::runtime_error {
  explicit NotHurwitz(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

struct NotStabilizable : std::runtime_error {
  explicit NotStabilizable(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
  explicit NoConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct NotSymmetric : std::runtime_error {
  explicit NotSymmetric(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteState : std::runtime_error {
  NonFiniteState(const std::string& what, double when)
      : std::runtime_error(what), time(when) {}
  double time;
};

struct NotIrreducible : std::runtime_error {
  explicit NotIrreducible(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mannctl
