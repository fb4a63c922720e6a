#pragma once

#include <stdexcept>
#include <string>

namespace coxtorus {

// Malformed input, missing seed file, bad configuration. Maps to exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mathematical operation that cannot proceed (division by zero, bad reduction, ...).
struct MathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad reduction of a cyclotomic number modulo a prime; callers retry with another prime.
struct BadReduction : MathError {
  using MathError::MathError;
};

// A bounded search ran out of budget without a verdict.
struct Inconclusive : MathError {
  using MathError::MathError;
};

}  // namespace coxtorus
