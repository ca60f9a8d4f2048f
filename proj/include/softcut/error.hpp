#pragma once

#include <stdexcept>
#include <string>

namespace softcut {

enum class ErrorKind {
  Parse,
  NonManifold,
  InvalidWeights,
  Degenerate,
  DegenerateSegment,
  Collinear,
  StaleSections,
  NonManifoldResult,
  NoVertices,
  NoSkin,
  BadWeights,
  StraddlingFace,
  Protocol,
  InvalidParams,
  Internal,
};

const char* to_string(ErrorKind kind);

/// Process exit code for a failure of this kind: 1 input/parse,
/// 2 geometric precondition, 3 internal invariant breach.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace softcut
