#pragma once

#include <stdexcept>
#include <string>

namespace coldpipe {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument or malformed input object (nonpositive dims, index out of range, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A scenario whose derived rates collapse to zero (e.g. zero effective compute).
class DegenerateScenario : public Error {
 public:
  using Error::Error;
};

// No plan satisfies the per-device memory constraint.
class Infeasible : public Error {
 public:
  using Error::Error;
};

// Instance exceeds a solver or oracle size guard.
class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

// Plan violates contiguity, coverage or device uniqueness.
class InvalidPlan : public Error {
 public:
  using Error::Error;
};

}  // namespace coldpipe
