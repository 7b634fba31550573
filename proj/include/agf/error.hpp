#pragma once

#include <stdexcept>
#include <string>

namespace agf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data violates a type invariant (negative value, zero cell size...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A numeric parameter is outside the range an operation accepts.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// The input object does not satisfy an operation's precondition
/// (e.g. a function that is not nonincreasing in every variable).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A size guard was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or configuration.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace agf
