#pragma once

#include <stdexcept>
#include <string>

namespace smbo {

/// Base class of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// numerics
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// design / testbed
class InvalidBounds : public Error {
 public:
  using Error::Error;
};
class UnknownFunction : public Error {
 public:
  using Error::Error;
};
class OutOfBounds : public Error {
 public:
  using Error::Error;
};

// kriging / smbo
class DegenerateData : public Error {
 public:
  using Error::Error;
};
class EmptyArchive : public Error {
 public:
  using Error::Error;
};

// analysis
class EmptySample : public Error {
 public:
  using Error::Error;
};
class InsufficientRuns : public Error {
 public:
  using Error::Error;
};

// campaign / cli
class ConfigParseError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smbo
