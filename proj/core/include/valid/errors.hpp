#pragma once

#include <stdexcept>
#include <string>

namespace valid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed-point magnitude left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// An analytic oracle (x*, expected gradient, ...) was requested from a loss
// family that does not provide one.
class UnsupportedOracle : public Error {
 public:
  using Error::Error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

class CalibrationFailed : public Error {
 public:
  using Error::Error;
};

// Configuration document error. `path()` is the dotted field path
// ("attack.sigma") that the message refers to.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace valid
