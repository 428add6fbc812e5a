#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rpr {

enum class ErrorKind {
  ZeroMean,
  DegenerateVariance,
  Parse,
  InvalidDesign,
  InvalidInput,
  SingularDenominator,
  NonRealParameters,
  PoleAtHalf,
  DegenerateMse,
  OutOfRange,
  TooLarge,
  Empty,
  InfeasibleTargets,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error the library raises. All of them describe bad input,
/// so the CLI maps them to exit code 2.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what);

  /// 1-based line number in the input file.
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

class SingularDenominatorError : public Error {
public:
  explicit SingularDenominatorError(double denominator);

  double denominator() const noexcept { return denominator_; }

private:
  double denominator_;
};

} // namespace rpr
