#pragma once

#include <stdexcept>
#include <string>

namespace rydqsl {

/// Malformed or inconsistent user configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A named invariant or validation check failed (CLI exit code 2).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation would exceed its configured memory budget (CLI exit code 3).
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rydqsl
