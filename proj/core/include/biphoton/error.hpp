#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace biphoton {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the domain of a physical model (angle >= 90 deg, Sellmeier pole, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Grid or window too coarse / too small for the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Operation applied to data in the wrong state (e.g. double accidental subtraction).
class StateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct ConfigIssue {
  std::string key;  // dotted key, e.g. "crystal.length_um"; empty for syntax errors
  int line = 0;     // 1-based, 0 when not tied to a line
  std::string message;
};

// Carries every problem found in a configuration document, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);

  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

}  // namespace biphoton
