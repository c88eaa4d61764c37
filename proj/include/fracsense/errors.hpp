#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracsense {

/// Operand shapes do not agree (e.g. A.cols() != x.size()).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Iterate became non-finite.
class DivergedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant that should hold by construction was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed matrix/vector text file. `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(detail) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

namespace detail {

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace detail
}  // namespace fracsense
