#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace itermean {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation outside (0, inf), a non-finite intermediate, or an unbound parameter.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Root bracketing failed: the target is outside the range the map reaches.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// An iteration cap was reached before the requested tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A series of inverse iterates grows instead of decaying.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace itermean
