#ifndef SADDLE_ERRORS_HPP
#define SADDLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace saddle {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid parameter (eta <= rho, damping outside (0,1], ...).
struct ParameterError : Error {
  using Error::Error;
};

// Non-finite value encountered while evaluating a problem.
struct EvaluationError : Error {
  using Error::Error;
};

// Linear system is singular or too ill-conditioned to trust.
struct SingularMatrixError : Error {
  using Error::Error;
};

// Two independent computations of the same quantity disagree beyond
// their certified tolerance.
struct ConsistencyError : Error {
  using Error::Error;
};

}  // namespace saddle

#endif  // SADDLE_ERRORS_HPP
