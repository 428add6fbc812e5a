#include "rpr/error.hpp"

#include <sstream>

namespace rpr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
  case ErrorKind::ZeroMean: return "ZeroMean";
  case ErrorKind::DegenerateVariance: return "DegenerateVariance";
  case ErrorKind::Parse: return "ParseError";
  case ErrorKind::InvalidDesign: return "InvalidDesign";
  case ErrorKind::InvalidInput: return "InvalidInput";
  case ErrorKind::SingularDenominator: return "SingularDenominator";
  case ErrorKind::NonRealParameters: return "NonRealParameters";
  case ErrorKind::PoleAtHalf: return "PoleAtHalf";
  case ErrorKind::DegenerateMse: return "DegenerateMSE";
  case ErrorKind::OutOfRange: return "OutOfRange";
  case ErrorKind::TooLarge: return "TooLarge";
  case ErrorKind::Empty: return "Empty";
  case ErrorKind::InfeasibleTargets: return "InfeasibleTargets";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {
std::string singular_message(double denominator) {
  std::ostringstream os;
  os.precision(17);
  os << "estimator denominator is " << denominator;
  return os.str();
}
} // namespace

SingularDenominatorError::SingularDenominatorError(double denominator)
    : Error(ErrorKind::SingularDenominator, singular_message(denominator)),
      denominator_(denominator) {}

} // namespace rpr
