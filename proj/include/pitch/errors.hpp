#pragma once

#include <stdexcept>
#include <string>

namespace pitch {

/// Thrown when a linear system is too ill-conditioned for its solution to be
/// numerically meaningful. Carries the reciprocal condition number that
/// triggered the failure.
class ConditioningError : public std::runtime_error {
public:
  ConditioningError(const std::string& what, double rcond)
      : std::runtime_error(what + " (rcond=" + std::to_string(rcond) + ")"),
        rcond_(rcond) {}

  double rcond() const noexcept { return rcond_; }

private:
  double rcond_;
};

/// Invalid user-supplied configuration (CLI flags, JSON experiment files).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace pitch
