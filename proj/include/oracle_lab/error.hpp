#pragma once

#include <stdexcept>
#include <string>

namespace oracle_lab {

// Base of every error the library raises. The CLI maps subclasses onto
// process exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class LayoutError : public Error {
 public:
  using Error::Error;
};

class ContractError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public Error {
 public:
  using Error::Error;
};

class CapError : public Error {
 public:
  using Error::Error;
};

// Raised when an internal cross-check (reconstruction, invariant) fails.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace oracle_lab
