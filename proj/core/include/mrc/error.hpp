#pragma once

#include <stdexcept>
#include <string>

namespace mrc {

// Base of every error raised by the library. The CLI maps the concrete type
// onto a process exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BoundsError : public Error {
 public:
  using Error::Error;
};

// Dims, block sizes or element counts that do not fit together.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable sample values.
class DataError : public Error {
 public:
  using Error::Error;
};

// Multi-resolution levels that overlap or leave gaps.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Operation invoked on an object in the wrong state (e.g. unpad of an unpadded array).
class StateError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated byte streams.
class FormatError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace mrc
