#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcalc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Bad parameters or inputs (parameter ranges, unbound names, bad shapes).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Evaluation outside the domain of a function (ln of a nonpositive number,
/// a point outside a p-function's domain, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An expression node that has no symbolic derivative (abs).
class NotDifferentiable : public Error {
 public:
  using Error::Error;
};

/// Iterative numerics that failed: divergence, non-convergence, missing roots,
/// infeasible certificates.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace pcalc
