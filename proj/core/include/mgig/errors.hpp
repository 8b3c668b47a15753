#pragma once

#include <stdexcept>
#include <string>

namespace mgig {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

/// Condition number exceeded the active ConditionGuard.
class IllConditioned : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation
/// (non-positive scalar, matrix not positive definite, zero divisor parameter).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A product that is symmetric in exact arithmetic came out asymmetric
/// beyond tolerance.
class SymmetryLoss : public Error {
 public:
  using Error::Error;
};

class InvalidLambda : public Error {
 public:
  using Error::Error;
};

class TooFewSamples : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mgig
