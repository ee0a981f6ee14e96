#pragma once

#include <stdexcept>
#include <string>

namespace pushsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contact parameter lies outside the admissible interval of a polygon edge.
class OutOfEdge : public Error {
 public:
  using Error::Error;
};

/// Shape with zero support area or otherwise unusable geometry.
class DegenerateShape : public Error {
 public:
  using Error::Error;
};

class ZeroForceDirection : public Error {
 public:
  using Error::Error;
};

/// An integration step was requested for a separating contact.
class SeparatingStep : public Error {
 public:
  using Error::Error;
};

/// Invalid simulation or sweep configuration. `key()` names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key, const std::string& what) : Error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace pushsim
