#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "warphyp/pseudolinalg.hpp"

using namespace warphyp;

namespace {

bool close(double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; }

// Characteristic polynomial coefficients by Faddeev-LeVerrier:
// det(xI - A) = x^k + c[1] x^{k-1} + ... + c[k].
std::vector<double> charpoly(const Matrix& a) {
  const std::size_t k = a.rows();
  std::vector<double> c(k + 1, 0.0);
  c[0] = 1.0;
  Matrix m(k, k);
  for (std::size_t i = 1; i <= k; ++i) {
    Matrix am = a * m;
    for (std::size_t d = 0; d < k; ++d) am(d, d) += c[i - 1];
    m = am;
    Matrix prod = a * m;
    double tr = 0.0;
    for (std::size_t d = 0; d < k; ++d) tr += prod(d, d);
    c[i] = -tr / static_cast<double>(i);
  }
  return c;
}

// Roots by Durand-Kerner.
std::vector<std::complex<double>> poly_roots(const std::vector<double>& c) {
  const std::size_t k = c.size() - 1;
  std::vector<std::complex<double>> z(k);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t i = 0; i < k; ++i) z[i] = std::pow(seed, static_cast<double>(i));
  auto p = [&](std::complex<double> x) {
    std::complex<double> acc = 1.0;
    for (std::size_t i = 1; i <= k; ++i) acc = acc * x + c[i];
    return acc;
  };
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t i = 0; i < k; ++i) {
      std::complex<double> den = 1.0;
      for (std::size_t j = 0; j < k; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= p(z[i]) / den;
    }
  }
  return z;
}

}  // namespace

TEST_CASE("inner: worked examples") {
  const Signature s(3, 1);
  CHECK(inner(Vector{1, 0, 0}, Vector{1, 0, 0}, s) == 1.0);
  CHECK(inner(Vector{0, 0, 1}, Vector{0, 0, 1}, s) == -1.0);
  CHECK(inner(Vector{1, 0, 1}, Vector{1, 0, 1}, s) == 0.0);
  CHECK_THROWS_AS(inner(Vector{1, 0}, Vector{1, 0}, s), Error);
}

TEST_CASE("inner is symmetric and bilinear") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 1000; ++trial) {
    const int dim = 2 + trial % 5;
    const Signature s(dim, trial % (dim + 1));
    Vector u(dim), v(dim), w(dim);
    for (int i = 0; i < dim; ++i) u[i] = U(rng), v[i] = U(rng), w[i] = U(rng);
    const double a = U(rng), b = U(rng);
    Vector comb(dim);
    for (int i = 0; i < dim; ++i) comb[i] = a * u[i] + b * w[i];
    CHECK(close(inner(u, v, s), inner(v, u, s)));
    CHECK(close(inner(comb, v, s), a * inner(u, v, s) + b * inner(w, v, s), 1e-12 * 50));
  }
}

TEST_CASE("causal_character") {
  const Signature s(3, 1);
  CHECK(causal_character(Vector{1, 0, 0}, s, 1e-12) == CausalCharacter::Spacelike);
  CHECK(causal_character(Vector{0, 0, 1}, s, 1e-12) == CausalCharacter::Timelike);
  CHECK(causal_character(Vector{1, 0, 1}, s, 1e-12) == CausalCharacter::Null);
  try {
    causal_character(Vector{0, 0, 0}, s, 1e-12);
    FAIL("expected ZeroVector");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroVector);
  }
}

TEST_CASE("gram: worked examples") {
  std::vector<Vector> a{{1, 0, 0}, {0, 1, 0}};
  CHECK(gram(a, Signature(3, 0)) == Matrix::identity(2));
  std::vector<Vector> b{{1, 0, 0}, {0, 0, 1}};
  CHECK(gram(b, Signature(3, 1)) == Matrix{{1, 0}, {0, -1}});
  std::vector<Vector> c{{1, 1, 0}, {1, -1, 0}};
  CHECK(gram(c, Signature(3, 1)) == Matrix{{2, 0}, {0, 2}});
}

TEST_CASE("normal_cofactor: worked examples") {
  std::vector<Vector> e12{{1, 0, 0}, {0, 1, 0}};
  CHECK(normal_cofactor(e12, Signature(3, 0)) == Vector{0, 0, 1});
  CHECK(normal_cofactor(e12, Signature(3, 1)) == Vector{0, 0, -1});
  std::vector<Vector> e13{{1, 0, 0}, {0, 0, 1}};
  const Vector n = normal_cofactor(e13, Signature(3, 1));
  CHECK(n[0] == 0.0);
  CHECK(n[1] == -1.0);
  CHECK(n[2] == 0.0);
  std::vector<Vector> dep{{1, 0, 0}, {2, 0, 0}};
  try {
    normal_cofactor(dep, Signature(3, 0));
    FAIL("expected RankDeficient");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RankDeficient);
  }
}

TEST_CASE("normal_cofactor: orthogonality, determinant identity, orientation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int dim = 3; dim <= 6; ++dim) {
    for (int idx = 0; idx <= dim; ++idx) {
      const Signature s(dim, idx);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vector> t(dim - 1, Vector(dim));
        for (auto& v : t)
          for (auto& x : v) x = U(rng);
        const Vector n = normal_cofactor(t, s);
        double scale = 1.0;
        for (auto& v : t)
          for (double x : v) scale = std::max(scale, std::fabs(x));
        for (const auto& v : t) CHECK(std::fabs(inner(n, v, s)) <= 1e-12 * std::pow(scale, dim));
        // <N, w> = det(t_1, ..., t_n, w).
        Vector w(dim);
        for (auto& x : w) x = U(rng);
        Matrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
          for (int c = 0; c + 1 < dim; ++c) m(r, c) = t[c][r];
          m(r, dim - 1) = w[r];
        }
        CHECK(close(inner(n, w, s), determinant(m), 1e-10));
      }
      if (idx == 0) {
        std::vector<Vector> basis(dim - 1, Vector(dim, 0.0));
        for (int i = 0; i < dim - 1; ++i) basis[i][i] = 1.0;
        Vector expect(dim, 0.0);
        expect[dim - 1] = 1.0;
        CHECK(normal_cofactor(basis, s) == expect);
      }
    }
  }
}

TEST_CASE("solve_linear: worked examples") {
  CHECK(solve_linear(Matrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(solve_linear(Matrix{{2, 0}, {0, -1}}, Vector{4, 3}) == Vector{2, -3});
  const Vector x = solve_linear(Matrix{{1, 1}, {1, -1}}, Vector{2, 0});
  CHECK(close(x[0], 1.0));
  CHECK(close(x[1], 1.0));
  try {
    solve_linear(Matrix{{1, 2}, {2, 4}}, Vector{1, 1});
    FAIL("expected SingularMatrix");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularMatrix);
  }
}

TEST_CASE("eig_spectrum: worked examples") {
  const auto a = eig_spectrum(Matrix{{3, 0, 0}, {0, 3, 0}, {0, 0, 5}});
  REQUIRE(a.values.size() == 2);
  CHECK(close(a.values[0].value.real(), 3.0, 1e-12));
  CHECK(a.values[0].multiplicity == 2);
  CHECK(close(a.values[1].value.real(), 5.0, 1e-12));
  CHECK(a.values[1].multiplicity == 1);
  CHECK(a.real_diagonalizable);

  const auto r = eig_spectrum(Matrix{{0, 1}, {-1, 0}});
  REQUIRE(r.values.size() == 2);
  CHECK(close(r.values[0].value.imag(), -1.0, 1e-12));
  CHECK(close(r.values[1].value.imag(), 1.0, 1e-12));
  CHECK(!r.real_diagonalizable);

  const auto j = eig_spectrum(Matrix{{2, 1}, {0, 2}});
  REQUIRE(j.values.size() == 1);
  CHECK(close(j.values[0].value.real(), 2.0, 1e-9));
  CHECK(j.values[0].multiplicity == 2);
  CHECK(!j.real_diagonalizable);
}

TEST_CASE("eig_spectrum agrees with the characteristic polynomial on G^-1 H") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix g(3, 3), h(3, 3);
    // Indefinite symmetric G = diag(1, 1, -1) perturbed, symmetric H.
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double e = 0.2 * U(rng);
        g(i, j) = g(j, i) = (i == j ? (i == 2 ? -1.0 : 1.0) : 0.0) + e;
        h(i, j) = h(j, i) = U(rng);
      }
    // Every fifth instance gets a repeated eigenvalue: H = lambda G.
    if (trial % 5 == 0) h = 0.7 * g;
    const Matrix s = inverse(g) * h;
    const auto spec = eig_spectrum(s);
    auto roots = poly_roots(charpoly(s));
    std::size_t total = 0;
    for (const auto& ev : spec.values) {
      int count = 0;
      for (const auto& z : roots)
        if (std::abs(z - ev.value) <= 1e-5) ++count;
      CHECK(count == ev.multiplicity);
      total += static_cast<std::size_t>(ev.multiplicity);
    }
    CHECK(total == 3);
  }
}
