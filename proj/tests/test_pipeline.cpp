#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warphyp/hypersurface.hpp"
#include "warphyp/pipeline.hpp"

using namespace warphyp;

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

ScalarField T(const std::string& s) { return parse(s, {"t"}); }

struct Fixture {
  const char* f;
  double c;
  Interval I;
  Subcase s;
};

const Fixture kCase2[] = {
    {"t/2", 1.0, {0.5, 4.0}, Subcase::S21},
    {"cosh(t)", 0.0, {0.5, 2.0}, Subcase::S22a},
    {"t", -1.0, {0.5, 3.0}, Subcase::S22b},
    {"t", 0.5, {0.5, 3.0}, Subcase::S22c},
};

WarpedSpec warped(const Fixture& fx, int n) { return WarpedSpec{fx.I, T(fx.f), fx.c, n - 1, 0}; }

PipelineOptions quick() {
  PipelineOptions o;
  o.samples = 40;
  return o;
}

}  // namespace

TEST_CASE("classify_branch: worked examples") {
  const auto a = classify_branch(T("sin(t)"), 1.0, {0.1, 3.0});
  CHECK(a.branch == Branch::ConstantCurvature);
  CHECK(*a.K == doctest::Approx(1.0));
  CHECK(classify_branch(T("exp(t)"), 0.0, {-1, 1}).branch == Branch::ConstantCurvature);
  const auto r = classify_branch(T("t/2"), 1.0, {0.5, 4});
  CHECK(r.branch == Branch::Rotational);
  CHECK(*r.subcase == Subcase::S21);
  CHECK(r.eps_tilde == 1);
}

TEST_CASE("case1_curvature: worked examples") {
  const std::tuple<const char*, double, Interval, double> cases[] = {
      {"sin(t)", 1.0, {0.1, 3.0}, 1.0}, {"exp(t)", 0.0, {-1, 1}, -1.0}, {"t", 1.0, {0.5, 3}, 0.0}};
  for (const auto& [f, c, I, K] : cases) {
    const auto r = case1_curvature(T(f), c, I);
    CHECK(std::fabs(r.K - K) <= 1e-9);
    CHECK(r.spread <= 1e-9);
    CHECK(r.identity_residual <= 1e-10);
  }
  CHECK(kind_of([] { case1_curvature(T("t^2"), 0.0, {0.5, 2}); }) == ErrorKind::NotConstant);
}

TEST_CASE("solve_lambda_mu: worked examples") {
  const auto a = solve_lambda_mu(T("t/2"), 1.0, 1.0);
  CHECK(a.lambda == doctest::Approx(std::sqrt(3.0)));
  CHECK(a.mu == 0.0);
  CHECK(a.eps_tilde == 1);
  const auto b = solve_lambda_mu(T("t"), -1.0, 2.0);
  CHECK(b.lambda == doctest::Approx(std::sqrt(2.0) / 2));
  CHECK(b.mu == 0.0);
  CHECK(b.eps_tilde == -1);
  const auto c = solve_lambda_mu(T("cosh(t)"), 0.0, 1.0);
  CHECK(c.eps_tilde == -1);
  CHECK(c.lambda == doctest::Approx(std::tanh(1.0)));
  CHECK(c.mu == doctest::Approx(1.0 / std::tanh(1.0)));
  for (const auto& lm : {a, b, c}) CHECK(lm.residual <= 1e-12);
  CHECK(kind_of([] { solve_lambda_mu(T("t"), 1.0, 2.0); }) == ErrorKind::ZeroLambda);
}

TEST_CASE("subcase_dispatch: worked examples") {
  for (const auto& fx : kCase2) CHECK(subcase_dispatch(T(fx.f), fx.c, fx.I) == fx.s);
}

TEST_CASE("build_theta: worked examples") {
  const double pi = std::numbers::pi;
  const ShapeModel cone(T("t/2"), 1.0, {0.5, 4}, Subcase::S21);
  for (double t : {0.5, 1.3, 3.9}) CHECK(cone.theta(t) == doctest::Approx(pi / 6).epsilon(1e-14));
  const ShapeModel b(T("t"), -1.0, {0.5, 3}, Subcase::S22b);
  for (double t : {0.7, 2.0}) CHECK(b.theta(t) == doctest::Approx(0.881373587019543).epsilon(1e-12));
  const ShapeModel a(T("cosh(t)"), 0.0, {0.5, 2}, Subcase::S22a);
  for (double t : {0.5, 0.9, 1.4, 2.0}) CHECK(std::fabs(a.alpha(t) - std::sinh(t) / std::sinh(0.5)) <= 1e-9);
  CHECK(kind_of([&] { a.theta(1.0); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([&] { cone.theta(5.0); }) == ErrorKind::OutOfDomain);
}

TEST_CASE("shape checks hold on every Case-2 fixture") {
  for (const auto& fx : kCase2) {
    CAPTURE(fx.f);
    const ShapeModel m(T(fx.f), fx.c, fx.I, fx.s);
    const auto sc = shape_checks(m);
    CHECK(sc.relscurta <= 1e-12);
    CHECK(sc.theta <= 1e-8);
    CHECK(sc.primitive <= 1e-8);
  }
}

TEST_CASE("reconstruct_immersion: worked examples") {
  const auto cone = reconstruct_immersion(T("t/2"), 1.0, {0.5, 4}, 2);
  CHECK(cone.witness.axis == AxisType::Spacelike);
  CHECK(cone.witness.orbit == OrbitForm::UnitSphere);
  const double r3 = std::sqrt(3.0);
  for (const auto& p : sample_points(cone.immersion.domain(), 10, 4)) {
    const Vector x = cone.immersion.position(p);
    CHECK(x[0] == doctest::Approx(r3 / 2 * (p[0] - 0.5)).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(-p[0] / 2 * std::cos(p[1])).epsilon(1e-10));
    CHECK(x[2] == doctest::Approx(-p[0] / 2 * std::sin(p[1])).epsilon(1e-10));
  }

  // alpha = sinh t / sinh t0, so int alpha = (cosh t - cosh t0) / sinh t0 and
  // the radial profile alpha / (2 lambda) is cosh t / (2 sinh t0).
  const auto null = reconstruct_immersion(T("cosh(t)"), 0.0, {0.5, 2}, 2);
  CHECK(null.witness.axis == AxisType::Null);
  for (double t : {0.6, 1.2, 1.9}) {
    CHECK(null.witness.f2->value(t) == doctest::Approx(std::cosh(t) / (2 * std::sinh(0.5))).epsilon(1e-9));
    const double f1 = 0.5 * std::sinh(0.5) * (std::log(std::tanh(t / 2)) - std::log(std::tanh(0.25)));
    CHECK(null.witness.f1->value(t) == doctest::Approx(f1).epsilon(1e-9));
  }

  // coth(theta) = sqrt 2: sinh = 1, cosh = sqrt 2, so the profile is linear.
  const auto c = reconstruct_immersion(T("t"), 0.5, {0.5, 3}, 2);
  CHECK(c.witness.axis == AxisType::Timelike);
  for (double t : {0.6, 2.5}) {
    CHECK(c.witness.f1->value(t) == doctest::Approx(std::sqrt(2.0) * t).epsilon(1e-10));
    CHECK(c.witness.f2->value(t) == doctest::Approx(-(t - 0.5)).epsilon(1e-10));
  }

  CHECK(kind_of([] { reconstruct_immersion(T("sin(t)"), 1.0, {0.1, 3}, 2); }) == ErrorKind::InvalidSpec);
  CHECK(kind_of([] { reconstruct_immersion(T("t"), -1.0, {0.5, 3}, 2, Signature(3, 0)); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("Case-2 round trips pass for n = 2 and 3") {
  for (const auto& fx : kCase2) {
    for (int n : {2, 3}) {
      CAPTURE(fx.f);
      CAPTURE(n);
      const auto rep = run_pipeline(warped(fx, n), std::nullopt, quick());
      CHECK(rep.subcase == fx.s);
      for (const auto& r : rep.residuals) {
        CAPTURE(r.name);
        CHECK(r.value <= r.tol);
      }
      CHECK(rep.verdict());
      const auto [lp, lf] = expected_lengths(fx.s);
      CHECK(*rep.psi_length == doctest::Approx(lp).epsilon(1e-9));
      CHECK(*rep.phi_length == doctest::Approx(lf).epsilon(1e-9));
    }
  }
}

TEST_CASE("psi is the constant axis vector") {
  const auto rb = reconstruct_immersion(T("t/2"), 1.0, {0.5, 4}, 2);
  for (const auto& p : sample_points(rb.immersion.domain(), 8, 2)) {
    const auto pp = psi_phi_fields(*rb.shape, rb.immersion, p);
    CHECK(std::fabs(std::fabs(pp.psi[0]) - 1.0) <= 1e-9);
    CHECK(std::fabs(pp.psi[1]) <= 1e-9);
    CHECK(std::fabs(pp.psi[2]) <= 1e-9);
    CHECK(std::fabs(pp.phi[0]) <= 1e-9);
  }
}

TEST_CASE("constant curvature input is reported without reconstruction") {
  const auto rep = run_pipeline(WarpedSpec{{0.1, 3.0}, T("sin(t)"), 1.0, 2, 0});
  CHECK(rep.branch == Branch::ConstantCurvature);
  CHECK(!rep.subcase);
  CHECK(*rep.K == doctest::Approx(1.0));
  CHECK(rep.verdict());
}

TEST_CASE("negative controls") {
  // Rebuilt from f = t/3 but compared against f = t/2.
  const auto bad = reconstruct_immersion(T("t/3"), 1.0, {0.5, 4}, 2);
  const auto rep = verify_reconstruction(WarpedSpec{{0.5, 4}, T("t/2"), 1.0, 1, 0}, bad, quick());
  CHECK(rep.find("metric")->value > 1e-2);
  CHECK(!rep.verdict());

  CHECK(kind_of([] { classify_branch(T("t^2 + 1"), 0.0, {0.5, 2}); }) == ErrorKind::MixedBranch);
  CHECK(kind_of([] { classify_branch(T("t^2 + 1"), 1.0, {0.2, 1}); }) == ErrorKind::SignChange);
  CHECK(kind_of([] { classify_branch(T("t^2"), 1e-9, {0.01, 1}); }) == ErrorKind::SubcaseChange);
  CHECK(kind_of([] { classify_branch(T("t - 1"), 0.0, {0, 2}); }) == ErrorKind::NonPositiveWarp);
  CHECK(kind_of([] { classify_branch(T("2"), 0.0, {0, 2}); }) == ErrorKind::ConstantWarp);
}

TEST_CASE("tolerances and report JSON") {
  Tolerances t;
  t.set("metric", 1e-3);
  CHECK(t.get("metric") == 1e-3);
  CHECK(kind_of([&] { t.set("nope", 1); }) == ErrorKind::ConfigError);
  CHECK(kind_of([&] { t.set("psi", -1); }) == ErrorKind::ConfigError);
  CHECK(Tolerances::names().size() == 12);

  const WarpedSpec spec{{0.5, 3.0}, T("t"), -1.0, 1, 0};
  const auto a = run_pipeline(spec, std::nullopt, quick()).to_json();
  const auto b = run_pipeline(spec, std::nullopt, quick()).to_json();
  CHECK(a.dump() == b.dump());
  CHECK(a["schema_version"] == 1);
  CHECK(a["subcase"] == "S22b");
  CHECK(a["verdict"] == "pass");
}
