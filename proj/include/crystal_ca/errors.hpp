#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crystal_ca {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position` is a byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& detail, std::size_t position)
      : Error(detail + " (at position " + std::to_string(position) + ")"),
        detail_(detail),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
  std::size_t position_;
};

/// No crystal structure is available for the requested algebra and level.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

/// A configured size or budget limit was exceeded.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain an operation requires.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A crystal graph file violates a structural or admission requirement.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// The R-matrix oracle met an inconsistency or an unreachable element.
class OracleError : public Error {
 public:
  using Error::Error;
};

}  // namespace crystal_ca
