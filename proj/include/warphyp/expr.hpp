#pragma once

// Scalar expression DSL. Grammar (EBNF) is in docs/dsl.md.
//
//   expr    = term { ("+" | "-") term } ;
//   term    = unary { ("*" | "/") unary } ;
//   unary   = "-" unary | power ;
//   power   = primary [ "^" int ] ;
//   primary = number | ident | func "(" expr ")" | "(" expr ")" ;

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "warphyp/jet.hpp"

namespace warphyp {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Ln, Sqrt, Atan, Atanh };

std::string_view func_name(Func f) noexcept;

struct Expr {
  enum class Kind { Lit, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind = Kind::Lit;
  double value = 0.0;  // Lit
  int var = -1;        // Var
  int exponent = 0;    // Pow
  Func func = Func::Sin;
  std::shared_ptr<const Expr> lhs;  // unary operand / left operand / base
  std::shared_ptr<const Expr> rhs;

  friend bool operator==(const Expr& a, const Expr& b);
};

using ExprPtr = std::shared_ptr<const Expr>;

/// An immutable AST bound to an ordered list of variable names. Parameters
/// (named constants such as a sweep variable) are listed separately and
/// substituted at bind time.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(ExprPtr root, std::vector<std::string> vars);

  const Expr& root() const { return *root_; }
  ExprPtr root_ptr() const { return root_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  std::size_t arity() const noexcept { return vars_.size(); }
  bool empty() const noexcept { return root_ == nullptr; }

  /// Canonical text; parse(print()) reproduces the same AST.
  std::string print() const;

  /// Replace variable `name` by a literal, dropping it from the variable list.
  ScalarField bind(std::string_view name, double value) const;

  friend bool operator==(const ScalarField& a, const ScalarField& b);

 private:
  ExprPtr root_;
  std::vector<std::string> vars_;
};

/// Parse `src` over the given variables. "pi" is a builtin constant.
ScalarField parse(std::string_view src, std::vector<std::string> vars);

/// Plain double evaluation.
double eval(const ScalarField& field, std::span<const double> point);

/// All partial derivatives up to `order` (<= 3) at `point`.
Jet eval_jet(const ScalarField& field, std::span<const double> point, int order);

/// Evaluate with caller-supplied jets for each variable (shared layout).
Jet eval_jet(const ScalarField& field, std::span<const Jet> inputs);

}  // namespace warphyp
