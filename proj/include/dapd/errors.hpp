#pragma once

#include <stdexcept>
#include <string>

namespace dapd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside its documented range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what), line_(0) {}

  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An iterative solver hit its iteration cap or a stepsize underflow.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Iterates blew past the divergence guard.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A message would have crossed a non-edge of the communication graph.
class LocalityError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dapd
