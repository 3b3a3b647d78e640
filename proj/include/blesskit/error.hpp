#pragma once

#include <stdexcept>
#include <string>

namespace blesskit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operation would exceed a configured size cap (oracle cap, dictionary cap).
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, non-finite values, or a degenerate numerical state.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. The message carries the offending line number.
class FormatError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace blesskit
