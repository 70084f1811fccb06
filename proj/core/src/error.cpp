#include "mirkit/error.hpp"

namespace mirkit {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonPositiveTau: return "NonPositiveTau";
    case ErrorKind::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MissingPositiveSets: return "MissingPositiveSets";
    case ErrorKind::EmptyTripleSet: return "EmptyTripleSet";
    case ErrorKind::NoRelevant: return "NoRelevant";
    case ErrorKind::NegativeGain: return "NegativeGain";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::VersionUnsupported: return "VersionUnsupported";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::MissingKey: return "MissingKey";
    case ErrorKind::BadType: return "BadType";
    case ErrorKind::BadSpan: return "BadSpan";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Diverged: return "Diverged";
  }
  return "UnknownError";
}

int error_exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NonPositiveTau:
    case ErrorKind::NonPositiveTemperature:
      return 1;
    case ErrorKind::NonFinite:
    case ErrorKind::Diverged:
      return 3;
    default:
      return 2;
  }
}

}  // namespace mirkit
