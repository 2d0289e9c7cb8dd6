#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ricci {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed edge-list input. `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A caller broke an operation precondition (bad ids, unbalanced marginals, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Configuration outside its valid range (step size, fractions, theta).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptyGraphError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DomainError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Lazy walk requested at a node without neighbours.
class UndefinedWalkError : public Error {
 public:
  using Error::Error;
};

/// Transport between measures whose supports are not mutually reachable.
class DisconnectedSupportError : public Error {
 public:
  using Error::Error;
};

/// The Lin-Lu-Yau quotient did not settle while refining alpha toward 1.
class NumericInstabilityError : public Error {
 public:
  NumericInstabilityError(const std::string& what, double q_low, double q_high)
      : Error(what), q_low_(q_low), q_high_(q_high) {}
  double q_low() const noexcept { return q_low_; }
  double q_high() const noexcept { return q_high_; }

 private:
  double q_low_;
  double q_high_;
};

/// A flow update produced a non-positive weight.
class StepTooLargeError : public Error {
 public:
  StepTooLargeError(const std::string& what, std::size_t edge, long iteration)
      : Error(what), edge_(edge), iteration_(iteration) {}
  std::size_t edge() const noexcept { return edge_; }
  long iteration() const noexcept { return iteration_; }

 private:
  std::size_t edge_;
  long iteration_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// An internal postcondition failed; indicates a bug, not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ricci
