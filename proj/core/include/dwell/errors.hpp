#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace dwell {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its valid domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class NoSolution : public Error {
 public:
  using Error::Error;
};

class DegenerateState : public Error {
 public:
  using Error::Error;
};

class GridTooNarrow : public Error {
 public:
  using Error::Error;
};

class ResolutionError : public Error {
 public:
  using Error::Error;
};

class EdgeLeakage : public Error {
 public:
  using Error::Error;
};

class DriveOutOfRange : public Error {
 public:
  using Error::Error;
};

class UnstableIntegration : public Error {
 public:
  using Error::Error;
};

class PeriodMismatch : public Error {
 public:
  using Error::Error;
};

class NonuniformSampling : public Error {
 public:
  using Error::Error;
};

/// Configuration could not be parsed or validated. `field()` names the
/// offending key path (e.g. `params.lambda`), empty for syntax errors.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dwell
