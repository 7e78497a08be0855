#include <doctest.h>

#include <cmath>
#include <numbers>

#include "warphyp/hypersurface.hpp"
#include "warphyp/rotational.hpp"

using namespace warphyp;

namespace {

double max_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ConfigError;
}

std::shared_ptr<const Profile> P(const std::string& s) { return expression_profile(s); }

Vector center(const ImmersionSpec& F) {
  Vector c;
  for (const auto& iv : F.domain()) c.push_back(0.5 * (iv.lo + iv.hi));
  return c;
}

// Induced metric from central differences of the position map.
Matrix fd_metric(const ImmersionSpec& F, const Vector& p, double h = 1e-5) {
  const int n = F.chart_dim();
  std::vector<Vector> d;
  for (int i = 0; i < n; ++i) {
    Vector a = p, b = p;
    a[i] += h;
    b[i] -= h;
    const Vector xa = F.position(a), xb = F.position(b);
    Vector v(xa.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = (xa[k] - xb[k]) / (2 * h);
    d.push_back(v);
  }
  return gram(d, F.sig());
}

}  // namespace

TEST_CASE("orbit_chart: worked examples") {
  const std::vector<int> eu{1, 1};
  const Vector y = orbit_point(OrbitForm::UnitSphere, eu, std::vector<double>{0.7});
  CHECK(y[0] == doctest::Approx(std::cos(0.7)));
  CHECK(y[1] == doctest::Approx(std::sin(0.7)));

  const std::vector<int> lor{1, -1};
  const Vector h = orbit_point(OrbitForm::UnitHyperbolic, lor, std::vector<double>{0.5});
  CHECK(h[0] == doctest::Approx(std::sinh(0.5)));
  CHECK(h[1] == doctest::Approx(std::cosh(0.5)));
  CHECK(std::fabs(orbit_constraint(OrbitForm::UnitHyperbolic, lor, h)) <= 1e-14);

  const std::vector<int> par{1, 1, -1};
  const double v = 0.6;
  const Vector w = orbit_point(OrbitForm::Parabolic, par, std::vector<double>{v});
  CHECK(w[0] == doctest::Approx(1 - 0.25 * v * v));
  CHECK(w[1] == v);
  CHECK(w[2] == doctest::Approx(-1 - 0.25 * v * v));

  CHECK(kind_of([&] { orbit_point(OrbitForm::UnitSphere, eu, std::vector<double>{3.0}); }) == ErrorKind::OutOfDomain);
  CHECK(kind_of([&] { orbit_point(OrbitForm::UnitHyperbolic, eu, std::vector<double>{0.5}); }) ==
        ErrorKind::InvalidSpec);
}

TEST_CASE("orbit constraint holds on every admissible chart") {
  const std::vector<std::vector<int>> sign_sets = {{1, 1}, {1, -1}, {1, 1, 1}, {1, 1, -1}, {1, -1, -1},
                                                   {-1, -1}, {1, 1, 1, -1}, {1, 1, -1, -1}, {-1, -1, -1}};
  int charts = 0;
  for (const auto& s : sign_sets) {
    for (OrbitForm form : {OrbitForm::UnitSphere, OrbitForm::UnitHyperbolic, OrbitForm::Parabolic}) {
      std::vector<Vector> pts;
      try {
        pts = sample_points(orbit_domain(form, s), 40, 3);
        orbit_point(form, s, pts.front());
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidSpec);
        continue;
      }
      ++charts;
      for (const auto& u : pts) CHECK(std::fabs(orbit_constraint(form, s, orbit_point(form, s, u))) <= 1e-10);
    }
  }
  CHECK(charts >= 15);
}

TEST_CASE("generate_case1: worked examples") {
  const auto cyl = generate_case1(P("t"), P("2"), OrbitForm::UnitSphere, Signature(3, 0), {-1, 1});
  CHECK(max_diff(induced_metric(cyl, std::vector<double>{0.3, 0.4}), Matrix{{1, 0}, {0, 4}}) <= 1e-14);

  const auto cone = generate_case1(P("sqrt(3)*t/2"), P("t/2"), OrbitForm::UnitSphere, Signature(3, 0), {0.5, 2});
  for (double t : {0.6, 1.0, 1.9}) {
    const Matrix g = induced_metric(cone, std::vector<double>{t, 0.2});
    CHECK(max_diff(g, Matrix{{1, 0}, {0, t * t / 4}}) <= 1e-14);
  }

  // The hyperbola (sinh r, cosh r) has spacelike tangent in E^2_1, so the
  // cylinder over it is Riemannian.
  const auto hyp = generate_case1(P("t"), P("1"), OrbitForm::UnitHyperbolic, Signature(3, 1), {-1, 1});
  CHECK(max_diff(induced_metric(hyp, std::vector<double>{0.1, 0.7}), Matrix::identity(2)) <= 1e-14);
}

TEST_CASE("generate_case2: worked examples") {
  const auto lc = generate_case2(P("1"), P("t"), OrbitForm::UnitSphere, Signature(3, 1), {-1, 1});
  const Vector x = lc.position(std::vector<double>{0.25, 0.5});
  CHECK(x[0] == doctest::Approx(std::cos(0.5)));
  CHECK(x[1] == doctest::Approx(std::sin(0.5)));
  CHECK(x[2] == 0.25);
  CHECK(max_diff(induced_metric(lc, std::vector<double>{0.25, 0.5}), Matrix{{-1, 0}, {0, 1}}) <= 1e-14);

  const auto ds = generate_case2(P("sinh(t)"), P("cosh(t)"), OrbitForm::UnitSphere, Signature(3, 1), {0.5, 2});
  for (const auto& p : sample_points(ds.domain(), 20, 1)) {
    const Vector q = ds.position(p);
    CHECK(inner(q, q, ds.sig()) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  CHECK(kind_of([] { generate_case2(P("0"), P("t"), OrbitForm::UnitSphere, Signature(3, 1), {-1, 1}); }) ==
        ErrorKind::DegenerateMetric);
  CHECK(kind_of([] { generate_case2(P("1"), P("t"), OrbitForm::UnitSphere, Signature(3, 0), {-1, 1}); }) ==
        ErrorKind::InvalidSpec);
}

TEST_CASE("a spacelike axis needs a positive slot") {
  CHECK(kind_of([] { generate_case1(P("t"), P("2"), OrbitForm::UnitHyperbolic, Signature(3, 3), {0, 1}); }) ==
        ErrorKind::InvalidSpec);
  CHECK_NOTHROW(generate_case1(P("t"), P("2"), OrbitForm::UnitHyperbolic, Signature(3, 2), {0, 1}));
}

TEST_CASE("generate_case3: worked examples") {
  const Signature sig(3, 1);
  const auto F = generate_case3(P("-exp(-t)"), P("exp(t)"), sig, {-0.5, 0.5});
  CHECK(std::fabs(determinant(induced_metric(F, center(F)))) > 0.1);

  const std::vector<int> signs = orbit_signs(AxisType::Null, sig);
  const Vector n2 = orbit_point(OrbitForm::Parabolic, signs, std::vector<double>{0.0});
  CHECK(n2 == Vector{1, 0, -1});
  CHECK(inner(Vector{1, 0, 1}, n2, sig) == 2.0);

  CHECK(kind_of([&] { generate_case3(P("t"), P("0"), sig, {-0.5, 0.5}); }) == ErrorKind::DegenerateMetric);
  CHECK(kind_of([] { generate_case3(P("t"), P("1"), Signature(3, 0), {-0.5, 0.5}); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("rotational_diagnostic: worked examples") {
  const RotationalSpec cs{AxisType::Spacelike, OrbitForm::UnitSphere, P("t"), P("2"), Signature(3, 0), {-1, 1}};
  CHECK(rotational_diagnostic(make_immersion(cs), cs) <= 1e-10);
  CHECK(rotational_diagnostic(builtin_immersion("cone"), AxisType::Spacelike) <= 1e-8);
  CHECK(rotational_diagnostic(builtin_immersion("graph"), AxisType::Spacelike) > 1e-2);
  CHECK(rotational_diagnostic(builtin_immersion("null_case3"), AxisType::Null) <= 1e-10);
  CHECK(kind_of([&] { rotational_diagnostic(builtin_immersion("graph"), cs); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("generated immersions satisfy the identity suites") {
  const std::vector<RotationalSpec> specs = {
      {AxisType::Spacelike, OrbitForm::UnitSphere, P("t + 0.3*sin(t)"), P("2 + cos(t)"), Signature(3, 0), {-1, 1}},
      {AxisType::Spacelike, OrbitForm::UnitSphere, P("t^2"), P("1 + t^2"), Signature(4, 0), {0.2, 1}},
      {AxisType::Spacelike, OrbitForm::UnitHyperbolic, P("sinh(t)"), P("exp(t)"), Signature(4, 1), {-1, 1}},
      {AxisType::Spacelike, OrbitForm::UnitSphere, P("2*t"), P("cosh(t)"), Signature(4, 2), {-1, 1}},
      {AxisType::Timelike, OrbitForm::UnitSphere, P("sinh(t)"), P("cosh(t)"), Signature(4, 1), {0.5, 2}},
      {AxisType::Timelike, OrbitForm::UnitHyperbolic, P("2 + t"), P("t^3"), Signature(4, 2), {0.1, 1}},
      {AxisType::Null, OrbitForm::Parabolic, P("-exp(-t)"), P("exp(t)"), Signature(4, 1), {-0.5, 0.5}},
      {AxisType::Null, OrbitForm::Parabolic, P("t^2"), P("1 + t"), Signature(4, 2), {0.1, 0.9}},
  };
  for (const auto& s : specs) {
    CAPTURE(to_json(s).dump());
    const auto F = make_immersion(s);
    const auto batch = verify_identities(F, 40, 5);
    CHECK(batch.max.gauss <= 1e-6);
    CHECK(batch.max.codazzi <= 1e-6);
    CHECK(batch.max.tsinghua <= 1e-6);
    CHECK(rotational_diagnostic(F, s) <= 1e-10);
  }
}

TEST_CASE("Euclidean Case 1 is the classical surface of revolution") {
  const std::vector<std::pair<std::string, std::string>> profiles = {
      {"t", "2 + sin(t)"}, {"t^2", "exp(t)"}, {"sin(2*t)", "1.5 + t^3"}, {"ln(2 + t)", "cosh(t)"}};
  for (const auto& [a, b] : profiles) {
    const auto f1 = P(a), f2 = P(b);
    for (int n : {2, 3}) {
      const auto F = generate_case1(f1, f2, OrbitForm::UnitSphere, Signature(n + 1, 0), {-0.5, 0.5});
      for (const auto& p : sample_points(F.domain(), 25, 9)) {
        const Jet j1 = f1->jet(p[0], 1), j2 = f2->jet(p[0], 1);
        const double d1 = j1.coefficients()[1], d2 = j2.coefficients()[1], r = j2.value();
        Matrix want(n, n);
        want(0, 0) = d1 * d1 + d2 * d2;
        want(1, 1) = r * r;
        if (n == 3) want(2, 2) = r * r * std::sin(p[1]) * std::sin(p[1]);
        CHECK(max_diff(induced_metric(F, p), want) <= 1e-8);
      }
    }
  }
}

TEST_CASE("Case 3 metric structure matches finite differences") {
  const auto F = generate_case3(P("t^2 + 2*t"), P("exp(t/2)"), Signature(4, 1), {-0.5, 0.5});
  for (const auto& p : sample_points(F.domain(), 30, 2)) {
    const Matrix g = induced_metric(F, p);
    CHECK(max_diff(g, fd_metric(F, p)) <= 1e-6);
    // <F_t, F_v> = 0 and <F_v, F_v> = f2^2 eps on the orbit slots.
    CHECK(std::fabs(g(0, 1)) <= 1e-12);
    CHECK(std::fabs(g(0, 2)) <= 1e-12);
  }
}

TEST_CASE("PrimitiveProfile matches the closed-form antiderivative") {
  const Interval I{0.0, 2.0};
  const PrimitiveProfile pr(
      [](double t, int order) {
        const auto& L = JetLayout::get(1, order);
        return cos(Jet::variable(L, 0, t));
      },
      0.5, I, "cos");
  for (double t : {0.0, 0.3, 1.1, 2.0}) {
    const Jet j = pr.jet(t, 3);
    CHECK(j.value() == doctest::Approx(0.5 + std::sin(t)).epsilon(1e-10));
    CHECK(j.derivative({1}) == doctest::Approx(std::cos(t)));
    CHECK(j.derivative({2}) == doctest::Approx(-std::sin(t)));
    CHECK(j.derivative({3}) == doctest::Approx(-std::cos(t)));
  }
}

TEST_CASE("RotationalSpec JSON round trip") {
  const RotationalSpec s{AxisType::Timelike, OrbitForm::UnitHyperbolic, P("2 + t"), P("t^3"), Signature(4, 2), {0.1, 1}};
  const auto j = to_json(s);
  const auto back = rotational_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.axis == s.axis);
  CHECK(back.orbit == s.orbit);
  CHECK(back.sig == s.sig);
  CHECK(kind_of([] { rotational_from_json(nlohmann::json{{"axis", "diagonal"}}); }) == ErrorKind::InvalidSpec);
}
