#pragma once

#include <stdexcept>
#include <string>

namespace docrep {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad corpus record, dimension mismatch, ...).
class InputError : public Error {
public:
  using Error::Error;
};

/// A numerical procedure could not produce a result (degenerate data, no convergence).
class NumericError : public Error {
public:
  using Error::Error;
};

}  // namespace docrep
