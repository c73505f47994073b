#pragma once

#include <stdexcept>
#include <string>

namespace axia {

/// Malformed input from a caller (bad flag, bad method string, out-of-range argument).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Data that fails validation: schema violations, shape mismatches, sparse tables.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An evaluation method that cannot be applied to a task.
class NotApplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace axia
