#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "warphyp/error.hpp"
#include "warphyp/expr.hpp"
#include "warphyp/jet.hpp"
#include "warphyp/quadrature.hpp"

#include "oracles.hpp"

using namespace warphyp;
using oracle::random_expr;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ConfigError;
}

}  // namespace

TEST_CASE("parse: worked examples") {
  const auto s = parse("sin(t)", {"t"});
  CHECK(s.root().kind == Expr::Kind::Call);
  CHECK(s.root().func == Func::Sin);
  CHECK(s.root().lhs->kind == Expr::Kind::Var);

  const auto p = parse("t^2 - 1", {"t"});
  CHECK(p.root().kind == Expr::Kind::Sub);
  CHECK(p.root().lhs->kind == Expr::Kind::Pow);
  CHECK(p.root().lhs->exponent == 2);
  CHECK(p.root().rhs->kind == Expr::Kind::Lit);
  CHECK(p.root().rhs->value == 1.0);

  const auto m = parse("cosh(t)*y1", {"t", "y1"});
  CHECK(m.root().kind == Expr::Kind::Mul);
  CHECK(m.root().lhs->func == Func::Cosh);
  CHECK(m.root().rhs->var == 1);
}

TEST_CASE("parse: precedence and associativity") {
  // ^ binds tighter than unary minus: -t^2 = -(t^2).
  CHECK(eval(parse("-t^2", {"t"}), std::vector<double>{3.0}) == -9.0);
  CHECK(eval(parse("8/4/2", {}), std::vector<double>{}) == 1.0);
  CHECK(eval(parse("10-4-3", {}), std::vector<double>{}) == 3.0);
  CHECK(eval(parse("2*pi", {}), std::vector<double>{}) == doctest::Approx(2 * std::numbers::pi));
}

TEST_CASE("parse: errors") {
  try {
    parse("sin(t", {"t"});
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.offset() == 5);
  }
  CHECK(kind_of([] { parse("t + q", {"t"}); }) == ErrorKind::UnknownIdentifier);
  CHECK(kind_of([] { parse("foo(t)", {"t"}); }) == ErrorKind::UnknownIdentifier);
  CHECK(kind_of([] { parse("", {"t"}); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse("t^1.5", {"t"}); }) == ErrorKind::SyntaxError);
}

TEST_CASE("parse/print round trip") {
  const std::vector<std::string> corpus = {
      "sin(t)", "t^2 - 1", "cosh(t)*y1", "-t^2", "(a - b) - c", "a - (b - c)", "a/(b*c)", "(a/b)*c",
      "-(a + b)", "exp(-t)", "ln(t)^3", "sqrt(1 + a^2)/atanh(b/2)", "1e-3*a + 2.5", "a^(-2)",
      "-exp(-t) + exp(t)*(1 - b^2/4)", "tan(a)*tanh(b) - sinh(c)/cosh(t)", "atan(a)^2", "(-a)^3",
      "0.1*a*b*c - 0.30000000000000004*t"};
  const std::vector<std::string> vars = {"t", "a", "b", "c", "y1"};
  for (const auto& src : corpus) {
    const auto f = parse(src, vars);
    const auto g = parse(f.print(), vars);
    CHECK_MESSAGE(f == g, src << " -> " << f.print());
    CHECK(g.print() == f.print());
  }
}

TEST_CASE("eval_jet: worked examples") {
  const auto s = eval_jet(parse("sin(t)", {"t"}), std::vector<double>{0.0}, 2);
  CHECK(s.value() == 0.0);
  CHECK(s.partial({0}) == doctest::Approx(1.0));
  CHECK(s.partial({0, 0}) == doctest::Approx(0.0));

  const auto q = eval_jet(parse("t^2", {"t"}), std::vector<double>{3.0}, 2);
  CHECK(q.value() == 9.0);
  CHECK(q.partial({0}) == 6.0);
  CHECK(q.partial({0, 0}) == 2.0);

  const auto e = eval_jet(parse("exp(t)", {"t"}), std::vector<double>{1.0}, 3);
  const double E = std::exp(1.0);
  for (double d : {e.value(), e.partial({0}), e.partial({0, 0}), e.partial({0, 0, 0})})
    CHECK(d == doctest::Approx(E).epsilon(1e-14));
  // Central differences, step 1e-4.
  const double h = 1e-4;
  CHECK(std::fabs((std::exp(1 + h) - std::exp(1 - h)) / (2 * h) - e.partial({0})) <= 1e-6 * E);

  CHECK(kind_of([] { eval_jet(parse("t", {"t"}), std::vector<double>{1.0}, 4); }) == ErrorKind::OrderUnsupported);
  CHECK(kind_of([] { eval_jet(parse("ln(t)", {"t"}), std::vector<double>{-1.0}, 1); }) == ErrorKind::DomainError);
  CHECK(kind_of([] { eval_jet(parse("sqrt(t)", {"t"}), std::vector<double>{-1.0}, 1); }) ==
        ErrorKind::DomainError);
  CHECK(kind_of([] { eval_jet(parse("atanh(t)", {"t"}), std::vector<double>{1.0}, 1); }) ==
        ErrorKind::DomainError);
  CHECK(kind_of([] { eval_jet(parse("1/t", {"t"}), std::vector<double>{0.0}, 1); }) == ErrorKind::DivisionByZero);
}

TEST_CASE("jet arithmetic: worked examples") {
  const auto& L = JetLayout::get(1, 2);
  const Jet two(L, 2.0);
  const Jet t = Jet::variable(L, 0, 1.0);
  const Jet b = sin(t) + t * t;
  const Jet d = two * b;
  for (std::size_t i = 0; i < L.size(); ++i) CHECK(d.coefficients()[i] == 2.0 * b.coefficients()[i]);

  const Jet sq = t * t;
  CHECK(sq.value() == 1.0);
  CHECK(sq.partial({0}) == 2.0);
  CHECK(sq.partial({0, 0}) == 2.0);

  const auto& L3 = JetLayout::get(1, 3);
  const Jet t0 = Jet::variable(L3, 0, 0.0);
  const Jet st = sin(t0 * t0);
  CHECK(st.value() == 0.0);
  CHECK(st.partial({0}) == 0.0);
  CHECK(st.partial({0, 0}) == doctest::Approx(2.0));
  CHECK(st.partial({0, 0, 0}) == doctest::Approx(0.0));

  CHECK(kind_of([&] { t / Jet(L, 0.0); }) == ErrorKind::DivisionByZero);
  CHECK(kind_of([&] { t + t0; }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("jets of random expressions match finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> P(-0.8, 0.8);
  const std::vector<std::string> vars = {"x", "y"};
  const double h = 1e-4;
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = parse(random_expr(rng, 5), vars);
    const std::vector<double> p{P(rng), P(rng)};
    const Jet j = eval_jet(f, p, 3);
    CHECK(j.value() == doctest::Approx(eval(f, p)).epsilon(1e-13));
    auto shifted = [&](int var, double s) {
      auto q = p;
      q[var] += s;
      return eval_jet(f, q, 3);
    };
    // Each order is checked against central differences of the order below.
    for (int a = 0; a < 2; ++a) {
      const Jet jp = shifted(a, h), jm = shifted(a, -h);
      const double fd1 = (jp.value() - jm.value()) / (2 * h);
      const double scale1 = std::max(1.0, std::fabs(j.partial({a})));
      CHECK_MESSAGE(std::fabs(fd1 - j.partial({a})) <= 1e-5 * scale1, f.print());
      for (int b = 0; b < 2; ++b) {
        const double fd2 = (jp.partial({b}) - jm.partial({b})) / (2 * h);
        const double scale2 = std::max(1.0, std::fabs(j.partial({a, b})));
        CHECK_MESSAGE(std::fabs(fd2 - j.partial({a, b})) <= 1e-5 * scale2, f.print());
        for (int c = 0; c < 2; ++c) {
          const double fd3 = (jp.partial({b, c}) - jm.partial({b, c})) / (2 * h);
          const double scale3 = std::max(1.0, std::fabs(j.partial({a, b, c})));
          CHECK_MESSAGE(std::fabs(fd3 - j.partial({a, b, c})) <= 1e-5 * scale3, f.print());
        }
      }
    }
  }
}

TEST_CASE("sum and Leibniz rules") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> P(-0.8, 0.8);
  const std::vector<std::string> vars = {"x", "y"};
  for (int trial = 0; trial < 20; ++trial) {
    const std::string a = random_expr(rng, 3), b = random_expr(rng, 3);
    const std::vector<double> p{P(rng), P(rng)};
    const Jet ja = eval_jet(parse(a, vars), p, 3);
    const Jet jb = eval_jet(parse(b, vars), p, 3);
    const Jet js = eval_jet(parse("(" + a + ") + (" + b + ")", vars), p, 3);
    const Jet jm = eval_jet(parse("(" + a + ")*(" + b + ")", vars), p, 3);
    const Jet sum = ja + jb, prod = ja * jb;
    for (std::size_t i = 0; i < sum.coefficients().size(); ++i) {
      const double ss = std::max(1.0, std::fabs(sum.coefficients()[i]));
      const double ps = std::max(1.0, std::fabs(prod.coefficients()[i]));
      CHECK(std::fabs(js.coefficients()[i] - sum.coefficients()[i]) <= 1e-13 * ss);
      CHECK(std::fabs(jm.coefficients()[i] - prod.coefficients()[i]) <= 1e-13 * ps);
    }
    // Mixed partial of a product: d_x d_y (ab) = a_xy b + a_x b_y + a_y b_x + a b_xy.
    const double lhs = prod.partial({0, 1});
    const double rhs = ja.partial({0, 1}) * jb.value() + ja.partial({0}) * jb.partial({1}) +
                       ja.partial({1}) * jb.partial({0}) + ja.value() * jb.partial({0, 1});
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("jet restriction, truncation and univariate integration") {
  const auto f = parse("sin(x)*exp(y) + x*y^2", {"x", "y"});
  const Jet j = eval_jet(f, std::vector<double>{0.3, 0.7}, 3);
  const std::vector<int> keep{1};
  const Jet r = j.restrict_to(keep);
  CHECK(r.nvars() == 1);
  CHECK(r.partial({0, 0}) == doctest::Approx(j.partial({1, 1})));
  const Jet t = j.truncate(1);
  CHECK(t.order() == 1);
  CHECK(t.partial({0}) == j.partial({0}));

  const Jet c = eval_jet(parse("cos(s)", {"s"}), std::vector<double>{0.4}, 2);
  const Jet s = integrate_univariate(c, std::sin(0.4));
  CHECK(s.order() == 3);
  CHECK(s.value() == doctest::Approx(std::sin(0.4)));
  CHECK(s.partial({0}) == doctest::Approx(std::cos(0.4)));
  CHECK(s.partial({0, 0, 0}) == doctest::Approx(-std::cos(0.4)));
}

TEST_CASE("bind substitutes parameters") {
  const auto f = parse("a*t + 1", {"t", "a"});
  const auto g = f.bind("a", 3.0);
  CHECK(g.arity() == 1);
  CHECK(eval(g, std::vector<double>{2.0}) == 7.0);
}

TEST_CASE("adaptive Simpson and cumulative integrals") {
  CHECK(adaptive_simpson([](double x) { return std::cos(x); }, 0, 1) == doctest::Approx(std::sin(1.0)).epsilon(1e-12));
  CHECK(std::fabs(adaptive_simpson([](double x) { return std::exp(x); }, 0, 2) - (std::exp(2.0) - 1)) <= 1e-10);
  const CumulativeIntegral P([](double x) { return 1.0 / (1 + x * x); }, 0.0, 3.0, 64);
  for (double t : {0.0, 0.37, 1.0, 2.5, 3.0}) CHECK(std::fabs(P(t) - std::atan(t)) <= 1e-10);
  CHECK(kind_of([] { adaptive_simpson([](double x) { return 1.0 / x; }, -1, 1); }) == ErrorKind::QuadratureFailure);
}
