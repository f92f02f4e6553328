#include "dpl/error.hpp"

#include "dpl/rational.hpp"

namespace dpl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNegativeMass: return "NegativeMass";
    case ErrorKind::kNotNormalized: return "NotNormalized";
    case ErrorKind::kSupportNotBinary: return "SupportNotBinary";
    case ErrorKind::kPreconditionViolated: return "PreconditionViolated";
    case ErrorKind::kNotMonotone: return "NotMonotone";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kOutsidePositiveWindow: return "OutsidePositiveWindow";
    case ErrorKind::kInfeasibleCost: return "InfeasibleCost";
    case ErrorKind::kConstraintViolated: return "ConstraintViolated";
    case ErrorKind::kHypothesisFailedOnGrid: return "HypothesisFailedOnGrid";
    case ErrorKind::kConvexityWitnessFailed: return "ConvexityWitnessFailed";
    case ErrorKind::kSupportExceedsWindow: return "SupportExceedsWindow";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kParseError: return "ParseError";
  }
  return "Unknown";
}

NotNormalizedError::NotNormalizedError(mpq_class deficit)
    : Error(ErrorKind::kNotNormalized,
            "masses do not sum to 1 (deficit " + format_rational(deficit) + ")"),
      deficit_(std::move(deficit)) {}

namespace {

std::string reason_name(ParseError::Reason reason) {
  switch (reason) {
    case ParseError::Reason::kSyntax: return "syntax";
    case ParseError::Reason::kNormalization: return "normalization";
    case ParseError::Reason::kNegative: return "negative mass";
    case ParseError::Reason::kShape: return "shape";
  }
  return "unknown";
}

}  // namespace

ParseError::ParseError(std::size_t line, Reason reason, const std::string& detail)
    : Error(ErrorKind::kParseError, "line " + std::to_string(line) + ": " +
                                        reason_name(reason) + ": " + detail),
      line_(line),
      reason_(reason) {}

}  // namespace dpl
