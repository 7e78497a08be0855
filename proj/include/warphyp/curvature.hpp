#pragma once

// Levi-Civita connection and curvature of a chart metric given as jets.
//
// Convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// so in coordinates
//
//   R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
//             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik},
//
// and the lowered tensor is R_{ijkl} = <R(d_i, d_j) d_k, d_l>. With this choice
// the unit sphere has <R(X,Y)Y,X> = +1 on orthonormal pairs and the Gauss
// equation of a hypersurface reads
//
//   R_{ijkl} = eps~ (H_jk H_il - H_ik H_jl),
//
// matching <R(X,Y)Z,W> = <h(Y,Z),h(X,W)> - <h(X,Z),h(Y,W)> with h = eps~ H xi.
// See docs/conventions.md for the derivation.

#include <span>
#include <vector>

#include "warphyp/jet.hpp"
#include "warphyp/pseudolinalg.hpp"

namespace warphyp {

/// Dense n^3 array indexed (a, b, c).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const noexcept { return n_; }
  double& operator()(int a, int b, int c) { return data_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const { return data_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c]; }
  double max_abs() const noexcept;

 private:
  int n_ = 0;
  std::vector<double> data_;
};

/// Dense n^4 array indexed (a, b, c, d).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  int dim() const noexcept { return n_; }
  double& operator()(int a, int b, int c, int d) { return data_[idx(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return data_[idx(a, b, c, d)]; }
  double max_abs() const noexcept;

 private:
  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> data_;
};

struct MetricCurvature {
  Matrix metric;
  Matrix inverse_metric;
  /// gamma(k, i, j) = Gamma^k_{ij}.
  Tensor3 gamma;
  /// up(l, i, j, k) = R^l_{ijk}.
  Tensor4 up;
  /// lowered(i, j, k, l) = R_{ijkl}.
  Tensor4 lowered;
  /// Size of the terms that build R^l_{ijk}: max|dGamma| + n max|Gamma|^2.
  /// Residuals that vanish identically are measured against this.
  double term_scale = 0.0;

  /// R(X,Y)Z in coordinates.
  Vector apply(std::span<const double> x, std::span<const double> y, std::span<const double> z) const;
  /// <R(X,Y)Y,X> / (<X,X><Y,Y> - <X,Y>^2). Throws DegeneratePlane.
  double sectional(std::span<const double> x, std::span<const double> y) const;
};

/// Metric given as n*n row-major jets of order >= 2 in n variables (first
/// order suffices when only the Christoffel symbols are needed).
MetricCurvature curvature_from_metric(std::span<const Jet> metric, int n);

}  // namespace warphyp
