#include "warphyp/expr.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "warphyp/error.hpp"

namespace warphyp {
namespace {

constexpr const char* kModule = "scalarjet";

struct FuncEntry {
  std::string_view name;
  Func func;
};

constexpr std::array<FuncEntry, 11> kFuncs{{
    {"sin", Func::Sin},
    {"cos", Func::Cos},
    {"tan", Func::Tan},
    {"sinh", Func::Sinh},
    {"cosh", Func::Cosh},
    {"tanh", Func::Tanh},
    {"exp", Func::Exp},
    {"ln", Func::Ln},
    {"sqrt", Func::Sqrt},
    {"atan", Func::Atan},
    {"atanh", Func::Atanh},
}};

ExprPtr make_lit(double v) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Lit;
  e->value = v;
  return e;
}

ExprPtr make_var(int idx) {
  auto e = std::make_shared<Expr>();
  e->kind = Expr::Kind::Var;
  e->var = idx;
  return e;
}

ExprPtr make_unary(Expr::Kind kind, ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(x);
  return e;
}

ExprPtr make_binary(Expr::Kind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  ExprPtr run() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(ErrorKind::SyntaxError, pos_, "empty expression");
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(ErrorKind::SyntaxError, pos_, "unexpected trailing input");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw SyntaxError(ErrorKind::SyntaxError, pos_, std::string("expected '") + c + "'");
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Expr::Kind::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Expr::Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Expr::Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Expr::Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr unary() {
    if (accept('-')) return make_unary(Expr::Kind::Neg, unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    bool paren = accept('(');
    bool negative = accept('-');
    skip_ws();
    const std::size_t digits_at = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ == digits_at) throw SyntaxError(ErrorKind::SyntaxError, at, "exponent must be an integer literal");
    const long value = std::stol(std::string(src_.substr(digits_at, pos_ - digits_at)));
    if (value > 64) throw SyntaxError(ErrorKind::SyntaxError, at, "exponent too large");
    if (paren) expect(')');
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->lhs = std::move(base);
    e->exponent = negative ? -static_cast<int>(value) : static_cast<int>(value);
    return e;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError(ErrorKind::SyntaxError, pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(ErrorKind::SyntaxError, pos_, std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw SyntaxError(ErrorKind::SyntaxError, start, "malformed number");
    return make_lit(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);
    for (const auto& f : kFuncs) {
      if (f.name == name) {
        expect('(');
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Call;
        e->func = f.func;
        e->lhs = expr();
        expect(')');
        return e;
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return make_var(static_cast<int>(i));
    if (name == "pi") return make_lit(std::numbers::pi);
    throw SyntaxError(ErrorKind::UnknownIdentifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// Precedence levels used by the printer: higher binds tighter.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_expr(const Expr& e, const std::vector<std::string>& vars, std::string& out);

void print_child(const Expr& child, int min_prec, const std::vector<std::string>& vars, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_expr(child, vars, out);
    out += ')';
  } else {
    print_expr(child, vars, out);
  }
}

void print_expr(const Expr& e, const std::vector<std::string>& vars, std::string& out) {
  switch (e.kind) {
    case Expr::Kind::Lit: out += format_number(e.value); return;
    case Expr::Kind::Var: out += vars.at(e.var); return;
    case Expr::Kind::Neg:
      out += '-';
      print_child(*e.lhs, 3, vars, out);
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print_child(*e.lhs, 1, vars, out);
      out += e.kind == Expr::Kind::Add ? " + " : " - ";
      print_child(*e.rhs, 2, vars, out);
      return;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      print_child(*e.lhs, 2, vars, out);
      out += e.kind == Expr::Kind::Mul ? "*" : "/";
      print_child(*e.rhs, 3, vars, out);
      return;
    case Expr::Kind::Pow:
      print_child(*e.lhs, 5, vars, out);
      out += '^';
      out += std::to_string(e.exponent);
      return;
    case Expr::Kind::Call:
      out += func_name(e.func);
      out += '(';
      print_expr(*e.lhs, vars, out);
      out += ')';
      return;
  }
}

[[noreturn]] void domain_error(const char* fn, double x) {
  throw Error(ErrorKind::DomainError, kModule, "eval", std::string(fn) + " undefined at " + std::to_string(x));
}

double apply(Func f, double x) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Tan: return std::tan(x);
    case Func::Sinh: return std::sinh(x);
    case Func::Cosh: return std::cosh(x);
    case Func::Tanh: return std::tanh(x);
    case Func::Exp: return std::exp(x);
    case Func::Ln:
      if (!(x > 0.0)) domain_error("ln", x);
      return std::log(x);
    case Func::Sqrt:
      if (x < 0.0) domain_error("sqrt", x);
      return std::sqrt(x);
    case Func::Atan: return std::atan(x);
    case Func::Atanh:
      if (!(std::fabs(x) < 1.0)) domain_error("atanh", x);
      return std::atanh(x);
  }
  return 0.0;
}

Jet apply(Func f, const Jet& x) {
  switch (f) {
    case Func::Sin: return sin(x);
    case Func::Cos: return cos(x);
    case Func::Tan: return tan(x);
    case Func::Sinh: return sinh(x);
    case Func::Cosh: return cosh(x);
    case Func::Tanh: return tanh(x);
    case Func::Exp: return exp(x);
    case Func::Ln: return log(x);
    case Func::Sqrt: return sqrt(x);
    case Func::Atan: return atan(x);
    case Func::Atanh: return atanh(x);
  }
  return x;
}

double eval_node(const Expr& e, std::span<const double> p) {
  switch (e.kind) {
    case Expr::Kind::Lit: return e.value;
    case Expr::Kind::Var: return p[e.var];
    case Expr::Kind::Neg: return -eval_node(*e.lhs, p);
    case Expr::Kind::Add: return eval_node(*e.lhs, p) + eval_node(*e.rhs, p);
    case Expr::Kind::Sub: return eval_node(*e.lhs, p) - eval_node(*e.rhs, p);
    case Expr::Kind::Mul: return eval_node(*e.lhs, p) * eval_node(*e.rhs, p);
    case Expr::Kind::Div: {
      const double d = eval_node(*e.rhs, p);
      if (d == 0.0) throw Error(ErrorKind::DivisionByZero, kModule, "eval", "division by zero");
      return eval_node(*e.lhs, p) / d;
    }
    case Expr::Kind::Pow: {
      const double b = eval_node(*e.lhs, p);
      if (b == 0.0 && e.exponent < 0) domain_error("pow", b);
      return std::pow(b, e.exponent);
    }
    case Expr::Kind::Call: return apply(e.func, eval_node(*e.lhs, p));
  }
  return 0.0;
}

Jet eval_node(const Expr& e, std::span<const Jet> in, const JetLayout& layout) {
  switch (e.kind) {
    case Expr::Kind::Lit: return Jet(layout, e.value);
    case Expr::Kind::Var: return in[e.var];
    case Expr::Kind::Neg: return -eval_node(*e.lhs, in, layout);
    case Expr::Kind::Add: return eval_node(*e.lhs, in, layout) + eval_node(*e.rhs, in, layout);
    case Expr::Kind::Sub: return eval_node(*e.lhs, in, layout) - eval_node(*e.rhs, in, layout);
    case Expr::Kind::Mul: {
      // Constant operands skip the full truncated product.
      if (e.lhs->kind == Expr::Kind::Lit) return e.lhs->value * eval_node(*e.rhs, in, layout);
      if (e.rhs->kind == Expr::Kind::Lit) return eval_node(*e.lhs, in, layout) * e.rhs->value;
      return eval_node(*e.lhs, in, layout) * eval_node(*e.rhs, in, layout);
    }
    case Expr::Kind::Div: {
      if (e.rhs->kind == Expr::Kind::Lit) {
        if (e.rhs->value == 0.0) throw Error(ErrorKind::DivisionByZero, kModule, "eval_jet", "division by zero");
        return eval_node(*e.lhs, in, layout) / e.rhs->value;
      }
      return eval_node(*e.lhs, in, layout) / eval_node(*e.rhs, in, layout);
    }
    case Expr::Kind::Pow: return pow(eval_node(*e.lhs, in, layout), e.exponent);
    case Expr::Kind::Call: return apply(e.func, eval_node(*e.lhs, in, layout));
  }
  return Jet(layout, 0.0);
}

ExprPtr substitute(const ExprPtr& e, int var, double value) {
  switch (e->kind) {
    case Expr::Kind::Lit: return e;
    case Expr::Kind::Var: {
      if (e->var == var) return make_lit(value);
      if (e->var > var) return make_var(e->var - 1);
      return e;
    }
    default: {
      auto copy = std::make_shared<Expr>(*e);
      if (e->lhs) copy->lhs = substitute(e->lhs, var, value);
      if (e->rhs) copy->rhs = substitute(e->rhs, var, value);
      return copy;
    }
  }
}

bool same_ptr_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

}  // namespace

std::string_view func_name(Func f) noexcept {
  for (const auto& e : kFuncs)
    if (e.func == f) return e.name;
  return "?";
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Lit: return a.value == b.value;
    case Expr::Kind::Var: return a.var == b.var;
    case Expr::Kind::Pow: return a.exponent == b.exponent && same_ptr_expr(a.lhs, b.lhs);
    case Expr::Kind::Call: return a.func == b.func && same_ptr_expr(a.lhs, b.lhs);
    default: return same_ptr_expr(a.lhs, b.lhs) && same_ptr_expr(a.rhs, b.rhs);
  }
}

ScalarField::ScalarField(ExprPtr root, std::vector<std::string> vars) : root_(std::move(root)), vars_(std::move(vars)) {}

std::string ScalarField::print() const {
  std::string out;
  if (root_) print_expr(*root_, vars_, out);
  return out;
}

ScalarField ScalarField::bind(std::string_view name, double value) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i] != name) continue;
    auto vars = vars_;
    vars.erase(vars.begin() + static_cast<std::ptrdiff_t>(i));
    return ScalarField(substitute(root_, static_cast<int>(i), value), std::move(vars));
  }
  throw Error(ErrorKind::UnknownIdentifier, kModule, "bind", "no variable named " + std::string(name));
}

bool operator==(const ScalarField& a, const ScalarField& b) {
  return a.vars_ == b.vars_ && same_ptr_expr(a.root_, b.root_);
}

ScalarField parse(std::string_view src, std::vector<std::string> vars) {
  Parser p(src, vars);
  ExprPtr root = p.run();
  return ScalarField(std::move(root), std::move(vars));
}

double eval(const ScalarField& field, std::span<const double> point) {
  if (point.size() != field.arity()) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "eval", "point arity differs from variable count");
  }
  return eval_node(field.root(), point);
}

Jet eval_jet(const ScalarField& field, std::span<const double> point, int order) {
  if (order < 0 || order > kMaxJetOrder) {
    throw Error(ErrorKind::OrderUnsupported, kModule, "eval_jet", "order must be in [0, 3]");
  }
  if (point.size() != field.arity()) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "eval_jet", "point arity differs from variable count");
  }
  const JetLayout& layout = JetLayout::get(static_cast<int>(field.arity()), order);
  std::vector<Jet> inputs;
  inputs.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) inputs.push_back(Jet::variable(layout, static_cast<int>(i), point[i]));
  return eval_node(field.root(), inputs, layout);
}

Jet eval_jet(const ScalarField& field, std::span<const Jet> inputs) {
  if (inputs.size() != field.arity() || inputs.empty()) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "eval_jet", "need one jet per variable");
  }
  return eval_node(field.root(), inputs, inputs[0].layout());
}

}  // namespace warphyp
