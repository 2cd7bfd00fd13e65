#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace propscore {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// A segment list or segment form that does not describe a valid score function.
class InvalidSegment : public Error {
 public:
  using Error::Error;
};

class NotMonotone : public Error {
 public:
  using Error::Error;
};

class NotNonPositive : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

/// Adaptive refinement ran out of budget, or a limit probe did not settle.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A required hypothesis (e.g. endpoint continuity) does not hold for the input.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

class ValueError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message)
      : Error("line " + std::to_string(line) + " (" + field + "): " + message),
        line_(line),
        field_(std::move(field)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Well-formed document whose content contradicts its declared schema.
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace propscore
