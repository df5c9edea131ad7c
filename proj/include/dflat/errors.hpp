#pragma once

#include <stdexcept>
#include <string>

namespace dflat {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coordinate, parameter or outcome lies outside the open domain of a family.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Numerical Legendre conjugation did not reach the gradient tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A metric matrix is not symmetric positive definite at working precision.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

// A family configuration violates its invariants.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The requested quantity has no evaluation path for this family.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A geodesic used for quadrature leaves the chart domain.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Randomized verification could not build a valid configuration.
class SamplingExhausted : public Error {
 public:
  using Error::Error;
};

// A computed value violates a guaranteed property by more than rounding slack.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace dflat
