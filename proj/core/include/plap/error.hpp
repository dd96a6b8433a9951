#pragma once

#include <stdexcept>
#include <string>

namespace plap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation (bad grid, bad parameters).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A function evaluation produced a non-finite value or left its domain.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration, source specification or input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace plap
