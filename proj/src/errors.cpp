#include "corrlab/errors.hpp"

namespace corrlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidAlgebra: return "InvalidAlgebra";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotMultiplicative: return "NotMultiplicative";
    case ErrorKind::NotStarPreserving: return "NotStarPreserving";
    case ErrorKind::NotProjection: return "NotProjection";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::BaseMismatch: return "BaseMismatch";
    case ErrorKind::EndpointMismatch: return "EndpointMismatch";
    case ErrorKind::NotUnital: return "NotUnital";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotRightLinear: return "NotRightLinear";
    case ErrorKind::NotIntertwining: return "NotIntertwining";
    case ErrorKind::UnitConditionViolated: return "UnitConditionViolated";
    case ErrorKind::PentagonViolated: return "PentagonViolated";
    case ErrorKind::NotMonotone: return "NotMonotone";
    case ErrorKind::Unfillable: return "Unfillable";
    case ErrorKind::IncompatibleFaces: return "IncompatibleFaces";
    case ErrorKind::NotAnEquivalence: return "NotAnEquivalence";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ShapeViolation: return "ShapeViolation";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::FunctorialityViolated: return "FunctorialityViolated";
    case ErrorKind::OracleFillFailed: return "OracleFillFailed";
    case ErrorKind::CompatibilityViolated: return "CompatibilityViolated";
    case ErrorKind::BoundaryMismatch: return "BoundaryMismatch";
    case ErrorKind::NotStableOnDiagram: return "NotStableOnDiagram";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

}  // namespace corrlab
