#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcause {

/// Base class of all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent model / automaton input. `line` is 0 when not tied to a line.
class ModelError : public Error {
 public:
  explicit ModelError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A cause representation or cost/weight combination the requested operation does not handle.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A cause that violates its structural invariants (e.g. Q not within S_p).
class CauseError : public Error {
 public:
  using Error::Error;
};

/// Brute-force oracle refused an instance above its size guard,
/// or a depth-bounded check could not reach the required residual.
class LimitError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcause
