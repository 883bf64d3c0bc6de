#pragma once

#include <stdexcept>
#include <string>

namespace spg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed document. `line`/`column` are 1-based, 0 when unknown.
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line(line), column(column) {}
  std::size_t line;
  std::size_t column;
};

/// A well-formed document or object violating a model invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Colour token kind does not match what the payoff needs.
struct KindMismatch : Error {
  using Error::Error;
};

/// The payoff (or its combination with the requested operation) is not
/// supported by this routine.
struct UnsupportedSpec : Error {
  using Error::Error;
};

struct BudgetExceeded : Error {
  using Error::Error;
};

struct PreconditionError : Error {
  using Error::Error;
};

}  // namespace spg
