#include "lvts/error.hpp"

namespace lvts {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotInTimeScale: return "NotInTimeScale";
    case ErrorKind::NonRegressive: return "NonRegressive";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::SignIndefinite: return "SignIndefinite";
    case ErrorKind::DegenerateRoot: return "DegenerateRoot";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DelayLookupMiss: return "DelayLookupMiss";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace lvts
