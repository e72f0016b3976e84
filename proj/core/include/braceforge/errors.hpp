#pragma once

#include <stdexcept>
#include <string>

namespace braceforge {

/// Base class for all braceforge errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or mismatched inputs (wrong modulus, wrong dimension, bad file).
struct InputError : Error {
  using Error::Error;
};

/// An operation was invoked outside the hypotheses it needs
/// (e.g. a conversion requested where 2^k >= p).
struct PreconditionError : Error {
  using Error::Error;
};

/// An exhaustive enumeration would exceed a configured cap.
struct ResourceError : Error {
  using Error::Error;
};

}  // namespace braceforge
