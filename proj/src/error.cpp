#include "planetopo/error.hpp"

namespace planetopo {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::PoleInput: return "PoleInput";
    case ErrorKind::DegenerateChord: return "DegenerateChord";
    case ErrorKind::NotOnBoundary: return "NotOnBoundary";
    case ErrorKind::OnCurve: return "OnCurve";
    case ErrorKind::OnPath: return "OnPath";
    case ErrorKind::BadResolution: return "BadResolution";
    case ErrorKind::NoContact: return "NoContact";
    case ErrorKind::FixedPointNearX: return "FixedPointNearX";
    case ErrorKind::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorKind::FixedPointOnCurve: return "FixedPointOnCurve";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::NoEscape: return "NoEscape";
    case ErrorKind::EndpointOnJunction: return "EndpointOnJunction";
    case ErrorKind::UnresolvedTangency: return "UnresolvedTangency";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::NoValidPartition: return "NoValidPartition";
    case ErrorKind::DisconnectedComplement: return "DisconnectedComplement";
    case ErrorKind::NoChord: return "NoChord";
    case ErrorKind::ChordImageOverlap: return "ChordImageOverlap";
    case ErrorKind::OutsideWindow: return "OutsideWindow";
    case ErrorKind::ValueHit: return "ValueHit";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::BoundaryFixedPoint: return "BoundaryFixedPoint";
    case ErrorKind::InvalidCurve: return "InvalidCurve";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace planetopo
