#pragma once

#include <stdexcept>
#include <string>

namespace dran {

// Root of every error raised by the library. The CLI maps ConfigError to exit
// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// radio model
class DistanceTooSmall : public Error {
 public:
  using Error::Error;
};
class PowerGuardViolation : public Error {
 public:
  using Error::Error;
};
class NonPositivePower : public Error {
 public:
  using Error::Error;
};
class NoActiveBs : public Error {
 public:
  using Error::Error;
};

// scenario / config
class InvalidConfig : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, const std::string& what)
      : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public ConfigError {
 public:
  ValidationError(std::string key, const std::string& what)
      : ConfigError(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// rl core
class InsufficientSamples : public Error {
 public:
  using Error::Error;
};
class ArchitectureMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyMemory : public Error {
 public:
  using Error::Error;
};

// agents
class SearchSpaceTooLarge : public Error {
 public:
  using Error::Error;
};

// Raised when a run breaks one of its own invariants (e.g. an infeasible tuple
// reaching replay memory). Never caught inside the library.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dran
