#pragma once

#include <stdexcept>
#include <string>

namespace kmfg {

/// Error categories. The numeric value is the machine-greppable code
/// printed by the CLI as `error[ENNN]`; the hundreds digit selects the
/// process exit code.
enum class ErrorCode : int {
  Usage = 101,
  UnsupportedFormat = 102,

  InvalidMatrix = 201,
  Syntax = 202,
  UnknownName = 203,
  IndexOutOfRange = 204,
  InadmissibleKappa = 205,
  NotMinimalRepresentative = 206,
  EmptySubset = 207,
  DimensionMismatch = 208,
  InvalidPresentation = 209,
  VerificationFailed = 210,
  Io = 211,

  HypothesisRefused = 301,
  Reducible = 302,

  ResourceLimit = 401,
  Overflow = 402,
};

/// Exit code the CLI uses for a given error category.
constexpr int exit_code_for(ErrorCode code) noexcept {
  const int family = static_cast<int>(code) / 100;
  return family >= 1 && family <= 4 ? family : 1;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// "E201" etc.
  std::string tag() const { return "E" + std::to_string(static_cast<int>(code_)); }

 private:
  ErrorCode code_;
};

}  // namespace kmfg
