#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace corrlab {

enum class ErrorKind {
  InvalidAlgebra,
  ShapeMismatch,
  NotMultiplicative,
  NotStarPreserving,
  NotProjection,
  LengthMismatch,
  BaseMismatch,
  EndpointMismatch,
  NotUnital,
  NotUnitary,
  NotRightLinear,
  NotIntertwining,
  UnitConditionViolated,
  PentagonViolated,
  NotMonotone,
  Unfillable,
  IncompatibleFaces,
  NotAnEquivalence,
  DimensionTooLarge,
  IndexOutOfRange,
  ShapeViolation,
  NotNested,
  FunctorialityViolated,
  OracleFillFailed,
  CompatibilityViolated,
  BoundaryMismatch,
  NotStableOnDiagram,
  ParseError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string format_residual(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

/// Residual-carrying failure (pentagon, functoriality, multiplicativity...).
class ResidualError : public Error {
 public:
  ResidualError(ErrorKind kind, const std::string& where, double residual)
      : Error(kind, where + " (residual " + format_residual(residual) + ")"),
        where_(where),
        residual_(residual) {}

  const std::string& where() const noexcept { return where_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string where_;
  double residual_;
};

}  // namespace corrlab
