#pragma once

#include <stdexcept>
#include <string>

namespace emstab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precondition or schema violation.
struct InvalidArgument : Error {
  using Error::Error;
};

/// Iterative solver did not reach its tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

/// Time integration stopped early (NaN, blow-up guard, close approach).
struct EvolutionAbort : Error {
  EvolutionAbort(const std::string& what, long step_index, double time)
      : Error(what), step(step_index), t(time) {}
  long step;
  double t;
};

}  // namespace emstab
