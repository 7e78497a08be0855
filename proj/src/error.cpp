#include "warphyp/error.hpp"

namespace warphyp {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::OrderUnsupported: return "OrderUnsupported";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DegenerateMetric: return "DegenerateMetric";
    case ErrorKind::NullNormal: return "NullNormal";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::MixedBranch: return "MixedBranch";
    case ErrorKind::NonPositiveWarp: return "NonPositiveWarp";
    case ErrorKind::ConstantWarp: return "ConstantWarp";
    case ErrorKind::NotConstant: return "NotConstant";
    case ErrorKind::SignChange: return "SignChange";
    case ErrorKind::ZeroLambda: return "ZeroLambda";
    case ErrorKind::SubcaseChange: return "SubcaseChange";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, std::string module, std::string op, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " in " + module + "::" + op + ": " + detail),
      kind_(kind),
      module_(std::move(module)),
      op_(std::move(op)),
      detail_(detail) {}

SyntaxError::SyntaxError(ErrorKind kind, std::size_t offset, const std::string& detail)
    : Error(kind, "scalarjet", "parse", detail + " at byte " + std::to_string(offset)), offset_(offset) {}

}  // namespace warphyp
