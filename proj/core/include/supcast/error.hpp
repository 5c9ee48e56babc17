#pragma once

#include <stdexcept>
#include <string>

namespace supcast {

/// Raised when caller-supplied data violates an operation's preconditions
/// (bad dimensions, malformed files, out-of-range parameters).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a request is well-formed but exceeds a configured resource cap.
class RefusalError : public std::runtime_error {
 public:
  explicit RefusalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace supcast
