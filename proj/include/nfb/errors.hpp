#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nfb {

/// Thrown when operand shapes do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A parameter choice violates one of the convergence inequalities.
///
/// `inequality()` is a stable short name (e.g. "lambda_interval") that the
/// CLI prints so users can see which condition to relax.
class FeasibilityError : public std::runtime_error {
 public:
  FeasibilityError(std::string inequality, const std::string& what)
      : std::runtime_error(inequality + ": " + what), inequality_(std::move(inequality)) {}

  const std::string& inequality() const noexcept { return inequality_; }

 private:
  std::string inequality_;
};

/// File could not be read or written, or its contents are malformed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nfb
