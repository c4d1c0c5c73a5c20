#pragma once

#include <stdexcept>
#include <string>

namespace gammaratio {

/// Base class for every error this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A gamma argument is (within tolerance) a nonpositive integer.
class PoleError : public Error {
 public:
  PoleError(const std::string& factor, double value)
      : Error("gamma pole: " + factor + " = " + std::to_string(value) +
              " is a nonpositive integer"),
        factor_(factor),
        value_(value) {}

  const std::string& factor() const { return factor_; }
  double value() const { return value_; }

 private:
  std::string factor_;
  double value_;
};

/// A running product left the representable range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No closed-form coefficient family exists beyond order 4.
class UnsupportedOrder : public Error {
 public:
  explicit UnsupportedOrder(int order)
      : Error("unsupported expansion order p = " + std::to_string(order) +
              ": coefficient families are available only for p <= 4") {}
};

/// A lower parameter of a terminating 3F2 hit a nonpositive integer
/// before the series was cut off.
class DegenerateDenominator : public Error {
 public:
  DegenerateDenominator(const std::string& parameter, int term_index)
      : Error("degenerate 3F2 denominator: lower parameter " + parameter +
              " vanishes at term j = " + std::to_string(term_index)) {}
};

/// A Pochhammer factor in the inner-sum denominator vanishes.
class DenominatorPole : public Error {
 public:
  DenominatorPole(const std::string& factor, int k)
      : Error("inner-sum denominator pole: " + factor +
              " vanishes at k = " + std::to_string(k)),
        k_(k) {}

  int offending_k() const { return k_; }

 private:
  int k_;
};

/// The evaluation point n does not clear the s + M + 1 guard.
class EvaluationPointTooSmall : public Error {
 public:
  EvaluationPointTooSmall(long n, double bound)
      : Error("evaluation point n = " + std::to_string(n) +
              " too small: requires n > " + std::to_string(bound)) {}
};

/// Fewer than three grid rows survived the noise-floor filter.
class InsufficientData : public Error {
 public:
  explicit InsufficientData(std::size_t admissible)
      : Error("insufficient data for a decay fit: only " +
              std::to_string(admissible) + " admissible grid rows (need 3)") {}
};

}  // namespace gammaratio
