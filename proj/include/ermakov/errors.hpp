#pragma once

#include <stdexcept>
#include <string>

namespace ermakov {

/// Evaluation hit a pole or a zero divisor (x -> 0, a(t) -> 0, u1(t) -> 0).
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative scheme exhausted its budget before meeting its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A computation produced non-finite values or lost all accuracy
/// (overflow, step-size underflow, NaN from user callables).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Least-squares input was degenerate (all abscissae coincide).
struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ermakov
