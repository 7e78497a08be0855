#pragma once

// Warped products I x_f M(c) with a one-dimensional base and a space-form
// fiber of constant curvature c.
//
// Vertical vectors are given in fiber coordinates, and g denotes the fiber
// metric at the point, so the warped inner product of two vertical vectors is
// <V, W> = f(t)^2 g(V, W). Clause (3) of the connection formula is reported
// with this fiber-metric normalization: nor(nabla_V W) = -f f' g(V, W) E_1.

#include <optional>
#include <span>
#include <vector>

#include "warphyp/expr.hpp"
#include "warphyp/immersion.hpp"
#include "warphyp/jet.hpp"
#include "warphyp/pseudolinalg.hpp"

namespace warphyp {

struct WarpedSpec {
  Interval interval;
  /// Warping function of the single variable t.
  ScalarField f;
  double c = 0.0;
  int fiber_dim = 1;
  /// Number of negative slots in the fiber metric (minus signs last).
  int fiber_index = 0;
};

/// a E_1 + V with V in fiber coordinates.
struct TaggedVector {
  double horizontal = 0.0;
  Vector vertical;
};

/// (f, f', f'') at t. Throws OutOfDomain outside the interval.
std::array<double, 3> warp_derivatives(const WarpedSpec& spec, double t);

/// diag(1, f(t)^2 fiber_g).
Matrix warped_metric(const WarpedSpec& spec, double t, const Matrix& fiber_g);

/// Inner product of tagged vectors under the warped metric.
double warped_inner(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                    const TaggedVector& b);

/// c (g(V,W) U - g(U,W) V), the curvature R(U,V)W of the fiber space form.
Vector fiber_space_form(double c, std::span<const double> u, std::span<const double> v, std::span<const double> w,
                        const Matrix& fiber_g);

/// R(A,B)C assembled from the structural clauses by multilinearity.
TaggedVector warped_curvature(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                              const TaggedVector& b, const TaggedVector& c);

/// nabla_A B for constant-coefficient fields: the E_1 and f'/f clauses plus the
/// normal-to-fiber part of nabla_V W. The fiber Levi-Civita part of nabla_V W
/// depends on the fiber chart and is not included.
TaggedVector warped_connection(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                               const TaggedVector& b);

struct WarpedSectional {
  /// Planes spanned by E_1 and a vertical vector: -f''/f.
  double mixed;
  /// Vertical planes: (c - f'^2) / f^2.
  double fiber;
};
WarpedSectional warped_sectional(const WarpedSpec& spec, double t);

/// Jets of the conformal space-form metric eps_ij delta_ij / (1 + (c/4) sum eps_i u_i^2)^2
/// at the given fiber chart variables.
std::vector<Jet> space_form_metric(double c, int fiber_index, std::span<const Jet> u);

/// The warped metric dt^2 + f(t)^2 g_F(u) as (1 + fiber_dim)^2 jets in (t, u).
std::vector<Jet> warped_chart_metric(const WarpedSpec& spec, std::span<const double> point, int order);

struct WarpedFit {
  bool warped = false;
  double residual = 0.0;
  /// Normalization point: f(t0) = 1.
  double t0 = 0.0;
  /// Sampled normalized warping function.
  std::vector<double> t;
  std::vector<double> f;
  /// Fiber curvature in the normalized gauge; absent for one-dimensional fibers.
  std::optional<double> c;
};

/// Decide whether the induced metric of F has the form dt^2 + f(t)^2 g_F(u).
WarpedFit warped_fit(const ImmersionSpec& F, int samples = 64, double tol = 1e-7, double margin = 1e-2);

}  // namespace warphyp
