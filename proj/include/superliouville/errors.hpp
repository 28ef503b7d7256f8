#pragma once

#include <stdexcept>
#include <string>

namespace superliouville {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridTooSmall : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class SingularPoint : public Error {
 public:
  using Error::Error;
};

class InvalidSpinDirection : public Error {
 public:
  using Error::Error;
};

class NonConstantCurvature : public Error {
 public:
  using Error::Error;
};

class NotASolution : public Error {
 public:
  using Error::Error;
};

class EmptyAnnulus : public Error {
 public:
  using Error::Error;
};

class InvalidThreshold : public Error {
 public:
  using Error::Error;
};

class BallOutsideGrid : public Error {
 public:
  using Error::Error;
};

class LinearSolveFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed run configuration or unknown field name (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace superliouville
