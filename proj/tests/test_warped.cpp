#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "warphyp/curvature.hpp"
#include "warphyp/hypersurface.hpp"
#include "warphyp/warped.hpp"

#include "oracles.hpp"

using namespace warphyp;
using oracle::fiber_data;

namespace {

WarpedSpec make(const std::string& f, double c, int k, int idx = 0, Interval I = {-1, 2}) {
  return WarpedSpec{I, parse(f, {"t"}), c, k, idx};
}

double vmax(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

TEST_CASE("warped_metric: worked examples") {
  const auto triv = make("1", 0, 2);
  CHECK(warped_metric(triv, 0.3, Matrix::identity(2)) == Matrix::identity(3));
  const double pi = std::numbers::pi;
  const auto s = make("sin(t)", 1, 1, 0, {0.1, 3});
  const Matrix m = warped_metric(s, pi / 2, Matrix::identity(1));
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
  const auto e = make("exp(t)", 0, 2, 1);
  const Matrix me = warped_metric(e, 1.0, Matrix{{1, 0}, {0, -1}});
  const double E2 = std::exp(2.0);
  CHECK(me(0, 0) == 1.0);
  CHECK(me(1, 1) == doctest::Approx(E2));
  CHECK(me(2, 2) == doctest::Approx(-E2));
  try {
    warped_metric(e, 5.0, Matrix{{1, 0}, {0, -1}});
    FAIL("expected OutOfDomain");
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("warped_curvature: worked examples") {
  const auto s = make("exp(t)", 0, 1);
  const Matrix g = Matrix::identity(1);
  const TaggedVector E1{1.0, {0.0}}, V{0.0, {1.0}};
  const auto r1 = warped_curvature(s, 0.0, g, E1, V, E1);
  CHECK(r1.horizontal == 0.0);
  CHECK(r1.vertical[0] == doctest::Approx(1.0));
  const auto r2 = warped_curvature(s, 0.0, g, E1, TaggedVector{2.0, {0.0}}, V);
  CHECK(r2.horizontal == 0.0);
  CHECK(r2.vertical[0] == 0.0);
  const auto r3 = warped_curvature(s, 0.0, g, E1, V, V);
  CHECK(r3.horizontal == doctest::Approx(-1.0));
  CHECK(r3.vertical[0] == 0.0);
}

TEST_CASE("fiber_space_form: worked examples") {
  const Matrix g = Matrix::identity(2);
  const Vector U{1, 0}, V{0, 1}, W{0.3, -0.7};
  CHECK(vmax(fiber_space_form(0.0, U, V, W, g)) == 0.0);
  const Vector r = fiber_space_form(1.0, U, V, V, g);
  CHECK(r == Vector{1, 0});
  CHECK(vmax(fiber_space_form(-2.0, V, V, W, g)) == 0.0);
}

TEST_CASE("warped_connection: worked examples") {
  const Matrix g = Matrix::identity(1);
  const auto e = make("exp(t)", 0, 1);
  const TaggedVector E1{1.0, {0.0}}, V{0.0, {1.0}};
  const auto a = warped_connection(e, 0.4, g, E1, V);
  CHECK(a.horizontal == 0.0);
  CHECK(a.vertical[0] == doctest::Approx(1.0));
  const auto b = warped_connection(e, 0.4, g, E1, E1);
  CHECK(b.horizontal == 0.0);
  CHECK(b.vertical[0] == 0.0);
  const double pi = std::numbers::pi;
  const auto s = make("sin(t)", 1, 1, 0, {0.1, 3});
  const auto c = warped_connection(s, pi / 4, g, V, V);
  CHECK(c.horizontal == doctest::Approx(-0.5));
}

TEST_CASE("warped_sectional: worked examples") {
  const double pi = std::numbers::pi;
  const auto a = warped_sectional(make("sin(t)", 1, 2, 0, {0.1, 3}), pi / 3);
  CHECK(a.mixed == doctest::Approx(1.0));
  CHECK(a.fiber == doctest::Approx(1.0));
  const auto b = warped_sectional(make("exp(t)", 0, 2), 0.7);
  CHECK(b.mixed == doctest::Approx(-1.0));
  CHECK(b.fiber == doctest::Approx(-1.0));
  const auto c = warped_sectional(make("t", 1, 2, 0, {0.5, 3}), 2.0);
  CHECK(c.mixed == 0.0);
  CHECK(c.fiber == 0.0);
}

TEST_CASE("warped formulas agree with the explicit chart metric") {
  const std::vector<std::string> fs = {"exp(t)", "2 + sin(t)", "t^2 + 1", "cosh(t)", "exp(0.5*t)*(1.5 + cos(3*t))",
                                       "sqrt(1 + t^2)"};
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-1, 1);
  int checked_sectional = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 3;
    const int idx = static_cast<int>(rng() % static_cast<unsigned>(k + 1));
    const auto spec = make(fs[trial % fs.size()], 2.0 * U(rng), k, idx);
    Vector pt{0.5 + U(rng)};
    for (int i = 0; i < k; ++i) pt.push_back(0.4 * U(rng));
    const auto mc = curvature_from_metric(warped_chart_metric(spec, pt, 2), k + 1);
    const std::span<const double> u(pt.data() + 1, static_cast<std::size_t>(k));
    const auto fiber = fiber_data(spec, u);
    const Matrix& gF = fiber.metric;

    auto rnd = [&] {
      TaggedVector v{U(rng), Vector(k)};
      for (auto& x : v.vertical) x = U(rng);
      return v;
    };
    auto coords = [](const TaggedVector& v) {
      Vector c{v.horizontal};
      c.insert(c.end(), v.vertical.begin(), v.vertical.end());
      return c;
    };
    const TaggedVector A = rnd(), B = rnd(), C = rnd();
    const auto got = warped_curvature(spec, pt[0], gF, A, B, C);
    const Vector want = mc.apply(coords(A), coords(B), coords(C));
    const double scale = std::max(1.0, vmax(want));
    CHECK(std::fabs(got.horizontal - want[0]) <= 1e-6 * scale);
    for (int i = 0; i < k; ++i) CHECK(std::fabs(got.vertical[i] - want[i + 1]) <= 1e-6 * scale);

    // Connection: chart Christoffels minus the fiber's own Levi-Civita part.
    const auto conn = warped_connection(spec, pt[0], gF, A, B);
    const Vector a = coords(A), b = coords(B);
    Vector nab(k + 1, 0.0);
    for (int l = 0; l <= k; ++l)
      for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j) nab[l] += mc.gamma(l, i, j) * a[i] * b[j];
    for (int l = 0; l < k; ++l)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) nab[l + 1] -= fiber.gamma(l, i, j) * A.vertical[i] * B.vertical[j];
    const double cs = std::max(1.0, vmax(nab));
    CHECK(std::fabs(conn.horizontal - nab[0]) <= 1e-6 * cs);
    for (int i = 0; i < k; ++i) CHECK(std::fabs(conn.vertical[i] - nab[i + 1]) <= 1e-6 * cs);

    // Sectional curvatures on coordinate planes.
    const auto ks = warped_sectional(spec, pt[0]);
    Vector e0(k + 1, 0.0), e1(k + 1, 0.0);
    e0[0] = 1.0;
    e1[1] = 1.0;
    CHECK(mc.sectional(e0, e1) == doctest::Approx(ks.mixed).epsilon(1e-6));
    if (k >= 2) {
      Vector e2(k + 1, 0.0);
      e2[2] = 1.0;
      CHECK(mc.sectional(e1, e2) == doctest::Approx(ks.fiber).epsilon(1e-6));
      ++checked_sectional;
    }
  }
  CHECK(checked_sectional > 20);
}

TEST_CASE("warped_fit: worked examples") {
  const auto cone = warped_fit(builtin_immersion("cone"));
  CHECK(cone.warped);
  CHECK(cone.residual <= 1e-7);
  CHECK(!cone.c.has_value());
  for (std::size_t i = 0; i < cone.t.size(); ++i) CHECK(cone.f[i] == doctest::Approx(cone.t[i] / cone.t0).epsilon(1e-9));

  const auto sphere = warped_fit(builtin_immersion("sphere"));
  CHECK(sphere.warped);
  CHECK(sphere.residual <= 1e-7);
  for (std::size_t i = 0; i < sphere.t.size(); ++i)
    CHECK(sphere.f[i] == doctest::Approx(std::sin(sphere.t[i]) / std::sin(sphere.t0)).epsilon(1e-9));

  const auto graph = warped_fit(builtin_immersion("graph"));
  CHECK(!graph.warped);
  CHECK(graph.residual > 1e-3);
}
