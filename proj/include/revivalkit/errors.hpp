#pragma once

#include <stdexcept>
#include <string>

namespace revivalkit {

// Errors fall in two buckets so the CLI can map them onto exit codes:
// bad input (2) and numerical trouble (3).
enum class ErrorCategory { kConfig, kNumeric };

class Error : public std::runtime_error {
 public:
  Error(std::string kind, ErrorCategory category, const std::string& what)
      : std::runtime_error(kind + ": " + what),
        kind_(std::move(kind)),
        category_(category) {}

  const std::string& kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  std::string kind_;
  ErrorCategory category_;
};

#define REVIVALKIT_ERROR(Name, Category)                          \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what)                        \
        : Error(#Name, ErrorCategory::Category, what) {}          \
  }

REVIVALKIT_ERROR(ConfigError, kConfig);
REVIVALKIT_ERROR(ParameterError, kConfig);
REVIVALKIT_ERROR(DomainError, kConfig);
REVIVALKIT_ERROR(NotCoprime, kConfig);
REVIVALKIT_ERROR(PeriodMismatch, kConfig);
REVIVALKIT_ERROR(ProfileError, kConfig);
REVIVALKIT_ERROR(ResolutionError, kConfig);
REVIVALKIT_ERROR(TruncationError, kConfig);
REVIVALKIT_ERROR(TimeScaleError, kConfig);
REVIVALKIT_ERROR(EmptyWindow, kNumeric);
REVIVALKIT_ERROR(NumericalError, kNumeric);
REVIVALKIT_ERROR(ToleranceFailure, kNumeric);
REVIVALKIT_ERROR(NonClosingOrbit, kNumeric);
REVIVALKIT_ERROR(TopologyError, kNumeric);
REVIVALKIT_ERROR(MonotonicityError, kNumeric);
REVIVALKIT_ERROR(RootBracketError, kNumeric);
REVIVALKIT_ERROR(SolverFailure, kNumeric);
REVIVALKIT_ERROR(SupportError, kNumeric);
REVIVALKIT_ERROR(NoPeaks, kNumeric);

#undef REVIVALKIT_ERROR

}  // namespace revivalkit
