#include "softcut/error.hpp"

namespace softcut {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::NonManifold: return "NonManifold";
    case ErrorKind::InvalidWeights: return "InvalidWeights";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::DegenerateSegment: return "DegenerateSegment";
    case ErrorKind::Collinear: return "Collinear";
    case ErrorKind::StaleSections: return "StaleSections";
    case ErrorKind::NonManifoldResult: return "NonManifoldResult";
    case ErrorKind::NoVertices: return "NoVertices";
    case ErrorKind::NoSkin: return "NoSkin";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::StraddlingFace: return "StraddlingFace";
    case ErrorKind::Protocol: return "ProtocolError";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::Internal: return "InternalError";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::NonManifold:
    case ErrorKind::InvalidWeights:
    case ErrorKind::Protocol:
    case ErrorKind::InvalidParams:
      return 1;
    case ErrorKind::Degenerate:
    case ErrorKind::DegenerateSegment:
    case ErrorKind::Collinear:
    case ErrorKind::NonManifoldResult:
    case ErrorKind::NoVertices:
    case ErrorKind::NoSkin:
    case ErrorKind::BadWeights:
      return 2;
    case ErrorKind::StaleSections:
    case ErrorKind::StraddlingFace:
    case ErrorKind::Internal:
      return 3;
  }
  return 3;
}

}  // namespace softcut
