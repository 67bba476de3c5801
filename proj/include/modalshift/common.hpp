#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modalshift {

/// Raised for malformed or inconsistent inputs (files, configs, arguments).
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a well-formed run cannot complete.
class RuntimeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using ZoneId = std::int64_t;
using AgentId = std::int64_t;

inline constexpr const char* kToolVersion = "0.3.0";

}  // namespace modalshift
