#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qvi {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated (dimension mismatch, bad bounds...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete configuration, e.g. missing constants for an automatic step.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  EmptyInput,
  BadNumber,
  UnexpectedCharacter,
  UnexpectedToken,
  UnexpectedEnd,
  UnknownIdentifier,
  ArityMismatch,
  VariableOutOfRange,
  TrailingTokens,
  NonIntegerExponent,
};

const char* to_string(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  ParseErrorKind kind_;
  std::size_t offset_;
};

/// Division by zero, overflow or any other non-finite intermediate.
class EvalError : public Error {
 public:
  using Error::Error;
};

/// An inner iteration hit its cap with the residual still above tolerance.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double achieved_residual)
      : Error(what), residual_(achieved_residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class SingularLinearPart : public Error {
 public:
  using Error::Error;
};

class BracketingFailure : public Error {
 public:
  using Error::Error;
};

/// Every sampled pair was rejected, or the plan itself is malformed.
class SamplingError : public Error {
 public:
  using Error::Error;
};

class DiagnosticsError : public Error {
 public:
  using Error::Error;
};

}  // namespace qvi
