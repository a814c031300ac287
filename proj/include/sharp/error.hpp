#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sharp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quantity required by the operation is not known (e.g. f* for a gap check).
class Unavailable : public Error {
 public:
  using Error::Error;
};

/// The objective became non-finite or the Lipschitz estimate blew up.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed dataset content. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what),
        detail_(what),
        line_(line) {}
  /// Same error attributed to a named source ("path: line N: ...").
  ParseError(const std::string& source, const ParseError& inner)
      : Error(source + ": " + inner.what()), detail_(inner.detail_), line_(inner.line_) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t line_;
};

}  // namespace sharp
