#pragma once

#include <stdexcept>
#include <string>

namespace mcdc {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file (ragged rows, bad quoting, empty file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or option combinations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Data that violates a precondition of an operation.
class DataError : public Error {
 public:
  using Error::Error;
};

// Internal bookkeeping went out of sync; indicates a bug.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace mcdc
