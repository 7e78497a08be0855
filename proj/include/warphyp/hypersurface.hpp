#pragma once

#include <span>
#include <utility>
#include <vector>

#include "warphyp/curvature.hpp"
#include "warphyp/immersion.hpp"
#include "warphyp/pseudolinalg.hpp"

namespace warphyp {

struct FrameData {
  Vector point;
  Matrix G;
  Vector xi;
  int eps_tilde = 1;
  /// H_ij = <d_i d_j F, xi>.
  Matrix H;
  /// S = G^-1 H.
  Matrix S;
  Spectrum spectrum;
};

/// Everything computed from one order-3 jet evaluation at a point.
struct LocalGeometry {
  FrameData frame;
  std::vector<Vector> tangents;
  MetricCurvature curvature;
  /// dH(m, i, j) = d_m H_ij.
  Tensor3 dH;
};

/// Full frame, curvature and derivative data at p (immersion jets of order 3).
LocalGeometry local_geometry(const ImmersionSpec& F, std::span<const double> p);

Matrix induced_metric(const ImmersionSpec& F, std::span<const double> p);
/// n*n row-major jets of G of the given order (immersion jets one order higher).
std::vector<Jet> induced_metric_jets(const ImmersionSpec& F, std::span<const double> p, int order);
/// (xi, eps_tilde). Throws NullNormal.
std::pair<Vector, int> unit_normal(const ImmersionSpec& F, std::span<const double> p);
Matrix second_fundamental_form(const ImmersionSpec& F, std::span<const double> p);
Matrix shape_operator(const ImmersionSpec& F, std::span<const double> p);
FrameData frame_data(const ImmersionSpec& F, std::span<const double> p);
/// gamma(k, i, j) = Gamma^k_ij.
Tensor3 christoffel(const ImmersionSpec& F, std::span<const double> p);
MetricCurvature riemann_intrinsic(const ImmersionSpec& F, std::span<const double> p);
double sectional_curvature(const ImmersionSpec& F, std::span<const double> p, std::span<const double> x,
                           std::span<const double> y);

/// Residuals are max |lhs - rhs| divided by the largest contributing term
/// (absolute when that scale is below 1e-12).
struct IdentityResiduals {
  double gauss = 0.0;
  double codazzi = 0.0;
  double tsinghua = 0.0;
};

double gauss_residual(const LocalGeometry& g);
double codazzi_residual(const LocalGeometry& g);
double tsinghua_residual(const LocalGeometry& g);
IdentityResiduals identity_residuals(const LocalGeometry& g);

double gauss_residual(const ImmersionSpec& F, std::span<const double> p);
double codazzi_residual(const ImmersionSpec& F, std::span<const double> p);
double tsinghua_residual(const ImmersionSpec& F, std::span<const double> p);

struct IdentityBatch {
  std::vector<Vector> points;
  std::vector<IdentityResiduals> residuals;
  IdentityResiduals max;
};

/// Identity residuals at `count` quasi-random points of F's domain.
IdentityBatch verify_identities(const ImmersionSpec& F, int count, std::uint64_t seed, double margin = 1e-2,
                                unsigned threads = 0);

}  // namespace warphyp
