#pragma once

#include <stdexcept>
#include <string>

namespace twinkit {

/// Bad parameter supplied by the caller (r, k, strategy, policy).
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Input data or index sets violate an operation's preconditions.
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace twinkit
