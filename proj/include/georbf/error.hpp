#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace georbf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates a precondition (usage error, exit code 1).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An operation received an empty mesh/point set where content is required.
class EmptyInputError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Malformed input data (exit code 2). Carries the 1-based offending line.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structurally valid file with unsupported content (exit code 2).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// File system failure (exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Operand dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Linear solve did not converge (exit code 3).
class SolveError : public Error {
 public:
  SolveError(const std::string& msg, std::size_t iterations, double residual)
      : Error(msg + " (iterations=" + std::to_string(iterations) +
              ", relative residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  std::size_t iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  std::size_t iterations_;
  double residual_;
};

/// Incomplete factorization hit a zero pivot.
class FactorizationError : public Error {
 public:
  explicit FactorizationError(std::size_t row)
      : Error("zero pivot in incomplete factorization at row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// Destination points not covered by any RBF support (exit code 3).
class UncoveredPointsError : public Error {
 public:
  explicit UncoveredPointsError(std::vector<std::size_t> ids)
      : Error(describe(ids)), ids_(std::move(ids)) {}
  const std::vector<std::size_t>& ids() const { return ids_; }

 private:
  static std::string describe(const std::vector<std::size_t>& ids) {
    std::string s = "destination points outside every RBF support: ";
    const std::size_t shown = ids.size() < 8 ? ids.size() : 8;
    for (std::size_t i = 0; i < shown; ++i) {
      if (i) s += ", ";
      s += std::to_string(ids[i]);
    }
    if (ids.size() > shown) s += ", ... (" + std::to_string(ids.size()) + " total)";
    return s;
  }
  std::vector<std::size_t> ids_;
};

/// Other numerical failure (exit code 3).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Simulated communication layer failure (mailbox overflow).
class CommError : public Error {
 public:
  using Error::Error;
};

/// Invariant violation inside the library; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace georbf
