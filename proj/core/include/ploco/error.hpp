#pragma once

#include <stdexcept>
#include <string>

namespace ploco {

/// Raised when an input violates a type invariant or operation precondition.
/// `field()` names the offending field or parameter.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed file or record encountered while reading.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ploco
