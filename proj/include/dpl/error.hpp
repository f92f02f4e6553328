#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace dpl {

enum class ErrorKind {
  kNegativeMass,
  kNotNormalized,
  kSupportNotBinary,
  kPreconditionViolated,
  kNotMonotone,
  kDimensionMismatch,
  kLengthMismatch,
  kOutsidePositiveWindow,
  kInfeasibleCost,
  kConstraintViolated,
  kHypothesisFailedOnGrid,
  kConvexityWitnessFailed,
  kSupportExceedsWindow,
  kConfigError,
  kParseError,
};

std::string_view to_string(ErrorKind kind);

/// Base of every error thrown by the library. The kind is stable and
/// machine-checkable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Masses summed to something other than one; deficit = 1 - sum.
class NotNormalizedError : public Error {
 public:
  explicit NotNormalizedError(mpq_class deficit);

  const mpq_class& deficit() const noexcept { return deficit_; }

 private:
  mpq_class deficit_;
};

class ParseError : public Error {
 public:
  enum class Reason { kSyntax, kNormalization, kNegative, kShape };

  ParseError(std::size_t line, Reason reason, const std::string& detail);

  std::size_t line() const noexcept { return line_; }
  Reason reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  Reason reason_;
};

}  // namespace dpl
