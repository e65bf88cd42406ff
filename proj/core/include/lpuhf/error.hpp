#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpuhf {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-domain input (dimension mismatch, singular matrix, ...).
class InputError : public Error {
public:
  using Error::Error;
};

/// Problem size exceeds the configured dimension cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

/// An algebraic precondition (commutation, multiplicativity) does not hold.
class StructureError : public Error {
public:
  using Error::Error;
};

/// Operation is defined only for a narrower class of inputs (e.g. diagonal systems).
class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Dimension cap for materialized matrices. Defaults to 4096 and can be
/// overridden with the LPUHF_MAX_DIM environment variable.
std::size_t max_dimension();

/// Throws CapacityError when `dim` exceeds max_dimension().
void check_capacity(std::size_t dim, const std::string& what);

}  // namespace lpuhf
