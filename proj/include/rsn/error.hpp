#pragma once

#include <stdexcept>
#include <string>

namespace rsn {

// Every library failure derives from rsn::Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of an operation (off-shape cell, member cell where a
// residual cell is required, unsupported shape kind).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operation called in a state where its precondition fails (adding a non-corner).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Shape construction or nesting failure.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed input data: fillings, swap words, inclusion functions, records.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a hard computational cap (enumeration size).
class BudgetError : public Error {
 public:
  using Error::Error;
};

// A formula has no real solution for the given parameters.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// The process has nothing left to add.
class TerminalStateError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsn
