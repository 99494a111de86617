#pragma once

#include <stdexcept>
#include <string>

namespace opg {

// Invalid configuration, parameters, or inputs. Bench CLI maps this to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string &msg) : std::invalid_argument(msg) {}
};

// A runtime inequality check failed or could not be run. Bench CLI maps this to exit code 2.
class AuditError : public std::runtime_error {
 public:
  explicit AuditError(const std::string &msg) : std::runtime_error(msg) {}
};

// Filesystem / parse failures on input or output paths. Bench CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace opg
