#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace innerlab {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (|z| >= 1, negative mass, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or description.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Reduces an angle to [0, 2π).
double wrap_angle(double theta);

/// Reduces an angle to [-π, π).
double wrap_signed(double theta);

}  // namespace innerlab
