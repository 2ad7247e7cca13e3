#pragma once

#include <stdexcept>
#include <string>

namespace omrl {

// Error categories mapped to CLI exit codes: config 2, physics 3, io 4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PhysicsError : std::runtime_error {
  explicit PhysicsError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace omrl
