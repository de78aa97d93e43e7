#pragma once

#include <stdexcept>
#include <string>

namespace henon {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition (bad dimension, exponent, radius, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Exact integer result does not fit the supported range.
class RangeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A numerical procedure failed to deliver a result of the requested quality.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The discretisation cannot resolve the requested eigenfunctions.
class GridTooCoarseError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// No sign change of the target function inside the admissible bracket.
class NoSignChangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Shooting trajectory stayed positive up to the integration limit.
class NoZeroCrossingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace henon
