#pragma once

#include <stdexcept>
#include <string>

namespace seedmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input data (bad JSONL/CSV record, unreadable value).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or out-of-range configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Profiling was requested for an empty bad-seed set.
class EmptyProfileError : public Error {
 public:
  using Error::Error;
};

/// A persisted report uses an unsupported format version.
class VersionMismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace seedmap
