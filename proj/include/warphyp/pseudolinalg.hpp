#pragma once

// Indefinite-metric linear algebra on small dense vectors and matrices.
//
// Sign convention: the metric of E^{m}_s is diag(+1, ..., +1, -1, ..., -1)
// with the s minus signs in the LAST slots. Every module inherits it.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "warphyp/error.hpp"

namespace warphyp {

using Vector = std::vector<double>;

class Signature {
 public:
  Signature() = default;
  Signature(int ambient_dim, int index);

  int ambient_dim() const noexcept { return dim_; }
  int index() const noexcept { return index_; }
  /// +1 for the first dim-index slots, -1 for the rest.
  int eps(int slot) const noexcept { return slot < dim_ - index_ ? 1 : -1; }
  std::vector<int> signs() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int dim_ = 0;
  int index_ = 0;
};

enum class CausalCharacter { Spacelike, Timelike, Null };

const char* to_string(CausalCharacter c) noexcept;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  double max_abs() const noexcept;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, std::span<const double> x);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Relative tolerance for rank and singularity decisions.
inline constexpr double kRankTolerance = 1e-10;

double inner(std::span<const double> u, std::span<const double> v, const Signature& sig);

CausalCharacter causal_character(std::span<const double> v, const Signature& sig, double tol);

Matrix gram(std::span<const Vector> vectors, const Signature& sig);

/// The vector N with <N, w> = det(t_1, ..., t_n, w) for every w. For index 0
/// the basis {e_1, ..., e_n} maps to e_{n+1} in every dimension.
Vector normal_cofactor(std::span<const Vector> tangents, const Signature& sig);

/// Pivoted Gaussian elimination. Throws SingularMatrix.
Vector solve_linear(const Matrix& a, std::span<const double> b);
Matrix inverse(const Matrix& a);
double determinant(const Matrix& a);

/// Rank by full-pivot elimination, entries below tol * max|a| count as zero.
int numeric_rank(const Matrix& a, double rel_tol);

struct EigenValue {
  std::complex<double> value;
  int multiplicity = 1;
};

struct Spectrum {
  /// Distinct eigenvalues, sorted by real part then imaginary part.
  std::vector<EigenValue> values;
  /// All eigenvalues with repetition, same ordering.
  std::vector<std::complex<double>> raw;
  bool real_diagonalizable = false;
};

/// Eigenvalues of a general real matrix (k <= 16) by Hessenberg reduction and
/// shifted QR. Eigenvalues within cluster_tol * max(1, |A|) are merged.
Spectrum eig_spectrum(const Matrix& a, double cluster_tol = 1e-6);

// Generic kernels shared with the jet-valued code paths. T needs +, -, * and
// multiplication by double.

template <class T>
T inner_generic(std::span<const T> u, std::span<const T> v, const Signature& sig) {
  if (u.size() != v.size() || static_cast<int>(u.size()) != sig.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "pseudolinalg", "inner", "vector length differs from ambient dimension");
  }
  T acc = u[0] * v[0] * static_cast<double>(sig.eps(0));
  for (std::size_t i = 1; i < u.size(); ++i) acc = acc + u[i] * v[i] * static_cast<double>(sig.eps(static_cast<int>(i)));
  return acc;
}

/// Laplace expansion, intended for n <= 6. rows[i][j] is row i column j.
template <class T>
T determinant_laplace(const std::vector<std::vector<T>>& rows) {
  const std::size_t n = rows.size();
  if (n == 1) return rows[0][0];
  if (n == 2) return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0];
  T acc = rows[0][0] * 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<T>> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<T> r;
      r.reserve(n - 1);
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) r.push_back(rows[i][k]);
      minor.push_back(std::move(r));
    }
    T term = rows[0][j] * determinant_laplace(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// N_i = eps_i * C_i where C_i is the cofactor of w_i in det(t_1, ..., t_n, w).
template <class T>
std::vector<T> normal_cofactor_generic(const std::vector<std::vector<T>>& tangents, const Signature& sig) {
  const std::size_t m = static_cast<std::size_t>(sig.ambient_dim());
  if (tangents.size() + 1 != m) {
    throw Error(ErrorKind::DimensionMismatch, "pseudolinalg", "normal_cofactor", "need ambient_dim - 1 tangents");
  }
  for (const auto& t : tangents)
    if (t.size() != m)
      throw Error(ErrorKind::DimensionMismatch, "pseudolinalg", "normal_cofactor", "tangent length mismatch");
  std::vector<T> normal;
  normal.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    // Minor of the matrix with columns (t_1..t_n, w): delete row i and the last column.
    std::vector<std::vector<T>> minor;
    minor.reserve(m - 1);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == i) continue;
      std::vector<T> row;
      row.reserve(m - 1);
      for (const auto& t : tangents) row.push_back(t[r]);
      minor.push_back(std::move(row));
    }
    T cof = determinant_laplace(minor);
    const double sign = ((i + m - 1) % 2 == 0 ? 1.0 : -1.0) * static_cast<double>(sig.eps(static_cast<int>(i)));
    normal.push_back(cof * sign);
  }
  return normal;
}

}  // namespace warphyp
