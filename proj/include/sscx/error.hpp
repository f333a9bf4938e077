#pragma once

#include <stdexcept>
#include <string>

namespace sscx {

enum class ErrorKind {
  InvalidInput,
  UnknownName,
  StateCapExceeded,
  NotContractingWithinBound,
  LevelTooLarge,
  LevelTooSmall,
  DifferentLevels,
  KTooLarge,
  NotAnIterate,
  UndecidedEquivalence,
  NotStabilized,
  ZeroInradius,
};

const char* to_string(ErrorKind kind) noexcept;

/// All library failures are reported through this exception; `kind()` is
/// what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Budget-type failures: the computation may succeed with larger caps.
  bool is_cap_error() const noexcept {
    return kind_ == ErrorKind::StateCapExceeded || kind_ == ErrorKind::NotContractingWithinBound ||
           kind_ == ErrorKind::LevelTooLarge;
  }

 private:
  ErrorKind kind_;
};

}  // namespace sscx
