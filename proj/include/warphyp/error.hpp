#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warphyp {

enum class ErrorKind {
  DimensionMismatch,
  ZeroVector,
  RankDeficient,
  SingularMatrix,
  ConvergenceFailure,
  SyntaxError,
  UnknownIdentifier,
  DomainError,
  OrderUnsupported,
  DivisionByZero,
  QuadratureFailure,
  DegenerateMetric,
  NullNormal,
  DegeneratePlane,
  OutOfDomain,
  InvalidSpec,
  MixedBranch,
  NonPositiveWarp,
  ConstantWarp,
  NotConstant,
  SignChange,
  ZeroLambda,
  SubcaseChange,
  UnsupportedDimension,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Numerical or contract failure raised by any module. Carries the module and
/// operation that detected it so front ends can report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, std::string op, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& op() const noexcept { return op_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string op_;
  std::string detail_;
};

/// Parse errors also record the byte offset into the source text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, std::size_t offset, const std::string& detail);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace warphyp
