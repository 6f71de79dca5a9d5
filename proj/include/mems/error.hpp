#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mems {

enum class ErrorKind {
  InvalidSpec,
  DomainMismatch,
  SingularSystem,
  NoConvergence,
  FieldOutOfRange,
  NoSteadyState,
  EmptyBranch,
  RootOutOfRange,
  UnsupportedDomain,
  InvalidInitialData,
  NonFiniteState,
  IncompatibleRuns,
  NotConverged,
  InvalidParams,
  CeilingViolation,
  InsufficientSamples,
  HypothesisViolated,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the runner in particular) can turn it into a verdict.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mems
