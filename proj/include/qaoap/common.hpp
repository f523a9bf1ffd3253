#pragma once

#include <stdexcept>
#include <string>

namespace qaoap {

/// Invalid arguments, presets or configuration files. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or malformed data files. CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qaoap
