#ifndef MIRKIT_ERROR_HPP_
#define MIRKIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mirkit {

enum class ErrorKind {
  // argument / configuration
  InvalidArgument,
  NonPositiveTau,
  NonPositiveTemperature,
  // data
  ShapeMismatch,
  ZeroRow,
  OutOfRange,
  MissingPositiveSets,
  EmptyTripleSet,
  NoRelevant,
  NegativeGain,
  BadMagic,
  TruncatedFile,
  VersionUnsupported,
  FormatError,
  MissingKey,
  BadType,
  BadSpan,
  IoError,
  // numeric
  NonFinite,
  Diverged,
};

const char* error_kind_name(ErrorKind kind);

// Exit-code category used by the CLI: 1 = usage, 2 = data, 3 = numeric.
int error_exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mirkit

#endif  // MIRKIT_ERROR_HPP_
