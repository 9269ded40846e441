#pragma once

#include <stdexcept>
#include <string>

namespace kmpipe {

// Error taxonomy maps onto CLI exit codes: ConfigError -> 2,
// ParseError/DomainError/IoError -> 3, DivergenceError -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& msg, int epoch)
      : Error(msg), epoch_(epoch) {}
  int epoch() const { return epoch_; }

 private:
  int epoch_;
};

}  // namespace kmpipe
