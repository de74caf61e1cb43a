#pragma once

#include <stdexcept>
#include <string>

namespace fadm {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched input data (dimensions, non-finite samples, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the physical domain of a formula (e.g. s <= f).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration (JSON configs, model files).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File system and codec failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// An inverse transform produced a non-negligible imaginary part.
class SymmetryError : public InputError {
 public:
  using InputError::InputError;
};

/// Every candidate training sample was rejected.
class EmptyDatasetError : public Error {
 public:
  using Error::Error;
};

/// A simulated experiment could not produce a valid measurement.
class ExperimentError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_input(const std::string& what);

}  // namespace fadm
