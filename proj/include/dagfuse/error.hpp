#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dagfuse {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Graph construction

class GraphError : public Error {
 public:
  using Error::Error;
};

class CycleDetected : public GraphError {
 public:
  using GraphError::GraphError;
};

class SelfLoop : public GraphError {
 public:
  using GraphError::GraphError;
};

class DuplicateEdge : public GraphError {
 public:
  using GraphError::GraphError;
};

class VertexOutOfRange : public GraphError {
 public:
  using GraphError::GraphError;
};

// Argument checking

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class TooLarge : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class EmptyInput : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class InvalidProbabilityVector : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class EmptySample : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

class OutcomeOutOfRange : public PreconditionViolation {
 public:
  using PreconditionViolation::PreconditionViolation;
};

/// Solver iterations exhausted before the residual tolerances were met.
class NotConverged : public Error {
 public:
  NotConverged(std::size_t iterations, double primal_residual,
               double dual_residual)
      : Error("solver did not converge after " + std::to_string(iterations) +
              " iterations (primal residual " +
              std::to_string(primal_residual) + ", dual residual " +
              std::to_string(dual_residual) + ")"),
        iterations_(iterations),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual) {}

  std::size_t iterations() const { return iterations_; }
  double primal_residual() const { return primal_residual_; }
  double dual_residual() const { return dual_residual_; }

 private:
  std::size_t iterations_;
  double primal_residual_;
  double dual_residual_;
};

/// The sum/range guarantees of the estimator failed numerically. This
/// indicates a solver defect, never a data problem.
class ProbabilityContractViolated : public Error {
 public:
  using Error::Error;
};

/// Malformed input file; the message carries file and line.
class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace dagfuse
