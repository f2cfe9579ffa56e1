#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace planetopo {

enum class ErrorKind {
  EmptyInput,
  PoleInput,
  DegenerateChord,
  NotOnBoundary,
  OnCurve,
  OnPath,
  BadResolution,
  NoContact,
  FixedPointNearX,
  MeshTooCoarse,
  FixedPointOnCurve,
  CertificationFailed,
  NoEscape,
  EndpointOnJunction,
  UnresolvedTangency,
  InvalidPartition,
  NoValidPartition,
  DisconnectedComplement,
  NoChord,
  ChordImageOverlap,
  OutsideWindow,
  ValueHit,
  HypothesisViolation,
  BoundaryFixedPoint,
  InvalidCurve,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (and the CLI report) can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace planetopo
