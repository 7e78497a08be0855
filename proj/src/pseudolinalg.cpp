#include "warphyp/pseudolinalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace warphyp {
namespace {

constexpr const char* kModule = "pseudolinalg";

bool complex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

int rank_abs(Matrix a, double abs_tol) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  int rank = 0;
  std::vector<bool> row_used(rows, false);
  std::vector<bool> col_used(cols, false);
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    double best = 0.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        if (std::fabs(a(i, j)) > best) {
          best = std::fabs(a(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    if (best <= abs_tol) break;
    ++rank;
    row_used[bi] = true;
    col_used[bj] = true;
    for (std::size_t i = 0; i < rows; ++i) {
      if (row_used[i]) continue;
      const double f = a(i, bj) / a(bi, bj);
      for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(bi, j);
    }
  }
  return rank;
}

}  // namespace

Signature::Signature(int ambient_dim, int index) : dim_(ambient_dim), index_(index) {
  if (ambient_dim <= 0 || index < 0 || index > ambient_dim) {
    throw Error(ErrorKind::InvalidSpec, kModule, "Signature", "need ambient_dim > 0 and 0 <= index <= ambient_dim");
  }
}

std::vector<int> Signature::signs() const {
  std::vector<int> out(dim_);
  for (int i = 0; i < dim_; ++i) out[i] = eps(i);
  return out;
}

const char* to_string(CausalCharacter c) noexcept {
  switch (c) {
    case CausalCharacter::Spacelike: return "Spacelike";
    case CausalCharacter::Timelike: return "Timelike";
    case CausalCharacter::Null: return "Null";
  }
  return "?";
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, kModule, "Matrix", "ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::fabs(v));
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, kModule, "matmul", "inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, kModule, "matvec", "size mismatch");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, kModule, "add", "shape");
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) { return a + (-1.0) * b; }

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

double inner(std::span<const double> u, std::span<const double> v, const Signature& sig) {
  return inner_generic<double>(u, v, sig);
}

CausalCharacter causal_character(std::span<const double> v, const Signature& sig, double tol) {
  if (tol < 0.0) throw Error(ErrorKind::InvalidSpec, kModule, "causal_character", "negative tolerance");
  const bool all_small = std::all_of(v.begin(), v.end(), [tol](double x) { return std::fabs(x) <= tol; });
  if (all_small) throw Error(ErrorKind::ZeroVector, kModule, "causal_character", "vector is zero within tolerance");
  const double q = inner(v, v, sig);
  if (std::fabs(q) <= tol) return CausalCharacter::Null;
  return q > 0.0 ? CausalCharacter::Spacelike : CausalCharacter::Timelike;
}

Matrix gram(std::span<const Vector> vectors, const Signature& sig) {
  Matrix g(vectors.size(), vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i; j < vectors.size(); ++j) {
      const double v = inner(vectors[i], vectors[j], sig);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

Vector normal_cofactor(std::span<const Vector> tangents, const Signature& sig) {
  std::vector<std::vector<double>> t(tangents.begin(), tangents.end());
  auto n = normal_cofactor_generic<double>(t, sig);
  // Rank check on the Euclidean Gram matrix: the pseudo Gram can be singular
  // for independent vectors spanning a degenerate plane, which is still a
  // valid cofactor input.
  Matrix eg(t.size(), t.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j)
      eg(i, j) = std::inner_product(t[i].begin(), t[i].end(), t[j].begin(), 0.0);
    scale *= std::max(eg(i, i), 1e-300);
  }
  if (std::fabs(determinant(eg)) <= kRankTolerance * scale) {
    throw Error(ErrorKind::RankDeficient, kModule, "normal_cofactor", "tangent vectors are linearly dependent");
  }
  return n;
}

Vector solve_linear(const Matrix& a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw Error(ErrorKind::DimensionMismatch, kModule, "solve_linear", "shape");
  Matrix m = a;
  Vector x(b.begin(), b.end());
  const double scale = std::max(a.max_abs(), 1e-300);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(m(i, col)) > std::fabs(m(piv, col))) piv = i;
    if (std::fabs(m(piv, col)) <= kRankTolerance * scale) {
      throw Error(ErrorKind::SingularMatrix, kModule, "solve_linear", "pivot below tolerance");
    }
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      std::swap(x[piv], x[col]);
    }
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = m(i, col) / m(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
      x[i] -= f * x[col];
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m(i, j) * x[j];
    x[i] = acc / m(i, i);
  }
  return x;
}

Matrix inverse(const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    const Vector col = solve_linear(a, e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

double determinant(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::DimensionMismatch, kModule, "determinant", "not square");
  Matrix m = a;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (std::fabs(m(i, col)) > std::fabs(m(piv, col))) piv = i;
    if (m(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      const double f = m(i, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
    }
  }
  return det;
}

int numeric_rank(const Matrix& a, double rel_tol) { return rank_abs(a, rel_tol * std::max(a.max_abs(), 1e-300)); }

Spectrum eig_spectrum(const Matrix& a, double cluster_tol) {
  const std::size_t k = a.rows();
  if (a.cols() != k) throw Error(ErrorKind::DimensionMismatch, kModule, "eig_spectrum", "not square");
  if (k == 0 || k > 16) throw Error(ErrorKind::DimensionMismatch, kModule, "eig_spectrum", "need 1 <= k <= 16");

  Spectrum out;
  if (k == 1) {
    out.raw = {a(0, 0)};
  } else {
    Eigen::MatrixXd m(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) m(i, j) = a(i, j);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorKind::ConvergenceFailure, kModule, "eig_spectrum", "QR iteration did not converge");
    }
    const auto ev = solver.eigenvalues();
    out.raw.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.raw.push_back(ev(static_cast<Eigen::Index>(i)));
  }
  std::sort(out.raw.begin(), out.raw.end(), complex_less);

  const double scale = std::max(1.0, a.max_abs());
  const double tol = cluster_tol * scale;
  std::vector<std::vector<std::complex<double>>> clusters;
  std::vector<bool> used(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    if (used[i]) continue;
    std::vector<std::complex<double>> cl{out.raw[i]};
    used[i] = true;
    for (std::size_t j = i + 1; j < k; ++j) {
      if (!used[j] && std::abs(out.raw[j] - out.raw[i]) <= tol) {
        cl.push_back(out.raw[j]);
        used[j] = true;
      }
    }
    clusters.push_back(std::move(cl));
  }
  out.real_diagonalizable = true;
  for (const auto& cl : clusters) {
    std::complex<double> mean = std::accumulate(cl.begin(), cl.end(), std::complex<double>{}) / static_cast<double>(cl.size());
    if (std::fabs(mean.imag()) <= tol) mean = {mean.real(), 0.0};
    out.values.push_back({mean, static_cast<int>(cl.size())});
    if (mean.imag() != 0.0) {
      out.real_diagonalizable = false;
      continue;
    }
    Matrix shifted = a;
    for (std::size_t i = 0; i < k; ++i) shifted(i, i) -= mean.real();
    const int rank = rank_abs(shifted, 1e-7 * scale);
    if (rank != static_cast<int>(k) - static_cast<int>(cl.size())) out.real_diagonalizable = false;
  }
  std::sort(out.values.begin(), out.values.end(),
            [](const EigenValue& x, const EigenValue& y) { return complex_less(x.value, y.value); });
  return out;
}

}  // namespace warphyp
