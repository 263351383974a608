#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace suppest {

// Bad input or a violated precondition. The CLI maps these to exit code 1.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numbers did not work out (no convergence, singular system, zero
// coverage). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class InvalidInterval : public InputError {
 public:
  using InputError::InputError;
};

class InvalidGrid : public InputError {
 public:
  using InputError::InputError;
};

class InvalidEstimator : public InputError {
 public:
  using InputError::InputError;
};

// Chebyshev interval [n/k, c1 ln k] is empty; callers usually fall back to
// the counting estimator.
class IntervalCollapse : public InputError {
 public:
  using InputError::InputError;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public InputError {
 public:
  ValidationError(const std::string& what, std::size_t line = 0)
      : InputError(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EncodingError : public InputError {
 public:
  EncodingError(const std::string& what, std::size_t offset)
      : InputError("invalid UTF-8 at byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class RankDeficient : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class CoverageZero : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Iteration budget ran out before the duality gap reached the tolerance.
// Carries the best iterate found so callers can still inspect it.
class NonConvergence : public NumericalError {
 public:
  NonConvergence(const std::string& what, std::vector<double> best_coeffs,
                 double best_gap)
      : NumericalError(what),
        best_coeffs_(std::move(best_coeffs)),
        best_gap_(best_gap) {}
  const std::vector<double>& best_coeffs() const noexcept { return best_coeffs_; }
  double best_gap() const noexcept { return best_gap_; }

 private:
  std::vector<double> best_coeffs_;
  double best_gap_;
};

}  // namespace suppest
