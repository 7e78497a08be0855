#pragma once

// Classification and reconstruction of warped products I x_f M(c) immersed as
// hypersurfaces of E^{n+1}_s.
//
// Branch: D = c + f''f - f'^2 vanishes identically (constant curvature) or is
// bounded away from zero (rotational). On the rotational branch the shape
// operator is diag(mu, lambda, ..., lambda) with
//   -e mu lambda = f''/f,   e lambda^2 = (c - f'^2)/f^2,   e = <xi, xi>.
// Subcases: S21 (e = +1), and for e = -1 by r = f'/(f lambda):
//   S22a |r| = 1, S22b |r| < 1, S22c |r| > 1.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "warphyp/expr.hpp"
#include "warphyp/immersion.hpp"
#include "warphyp/jet.hpp"
#include "warphyp/quadrature.hpp"
#include "warphyp/rotational.hpp"
#include "warphyp/warped.hpp"

namespace warphyp {

enum class Branch { ConstantCurvature, Rotational };
enum class Subcase { S21, S22a, S22b, S22c };

const char* to_string(Branch b) noexcept;
const char* to_string(Subcase s) noexcept;
Subcase subcase_from_string(const std::string& s);

/// Named tolerances; names accepted by set() are listed in names().
struct Tolerances {
  double branch = 1e-9;
  double band = 1e-9;
  double case1 = 1e-9;
  double case1_identity = 1e-10;
  double relscurta = 1e-12;
  double theta = 1e-8;
  double primitive = 1e-8;
  double psi = 1e-6;
  double psi_length = 1e-6;
  double metric = 1e-6;
  double spectrum = 1e-6;
  double identity = 1e-6;

  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  static const std::vector<std::string>& names();
};

struct PipelineOptions {
  int grid = 256;
  int samples = 200;
  std::uint64_t seed = 1;
  double margin = 1e-2;
  unsigned threads = 0;
  Tolerances tol;
};

/// `count` equally spaced points of [lo, hi], endpoints included.
std::vector<double> grid_points(const Interval& I, int count);

struct BranchResult {
  Branch branch = Branch::Rotational;
  /// Constant curvature branch only.
  std::optional<double> K;
  /// Rotational branch only.
  std::optional<Subcase> subcase;
  int eps_tilde = 0;
};

/// f(t), f'(t), f''(t). InvalidSpec unless f is a field of t alone.
std::array<double, 3> warp_values(const ScalarField& f, double t);

BranchResult classify_branch(const ScalarField& f, double c, const Interval& I, int grid = 256,
                             const Tolerances& tol = {});

struct Case1Result {
  /// Mean of -f''/f over the grid.
  double K = 0.0;
  /// max - min of -f''/f.
  double spread = 0.0;
  /// max |-f''/f - (c - f'^2)/f^2|.
  double identity_residual = 0.0;
};
/// Throws NotConstant when the spread exceeds tol.case1 * max(1, |K|).
Case1Result case1_curvature(const ScalarField& f, double c, const Interval& I, int grid = 256,
                            const Tolerances& tol = {});

struct LambdaMu {
  double lambda = 0.0;
  double mu = 0.0;
  int eps_tilde = 0;
  /// Max relative residual of the two shape relations.
  double residual = 0.0;
};
/// Positive root lambda. ZeroLambda when (c - f'^2)/f^2 vanishes at t.
LambdaMu solve_lambda_mu(const ScalarField& f, double c, double t);

/// SignChange when eps_tilde varies over the grid, SubcaseChange when
/// |f'/(f lambda)| crosses 1.
Subcase subcase_dispatch(const ScalarField& f, double c, const Interval& I, int grid = 256,
                         const Tolerances& tol = {});

/// Shape data along I for one subcase. lambda here is the construction's
/// lambda: the positive root, except in S22a where it is f'/f (xi is
/// flipped so that f'/(f lambda) = 1), and mu follows it.
class ShapeModel {
 public:
  ShapeModel(ScalarField f, double c, Interval I, Subcase subcase, QuadratureOptions q = {}, int nodes = 256);

  Subcase subcase() const noexcept { return subcase_; }
  int eps_tilde() const noexcept { return eps_; }
  double c() const noexcept { return c_; }
  const Interval& interval() const noexcept { return I_; }
  /// Quadrature anchor t0 (left endpoint).
  double anchor() const noexcept { return I_.lo; }
  const ScalarField& f() const noexcept { return f_; }

  /// Univariate jets. lambda and theta up to order 2, mu up to order 1,
  /// log(alpha) and alpha up to order 2 (S22a only).
  Jet lambda_jet(double t, int order) const;
  Jet mu_jet(double t, int order) const;
  Jet theta_jet(double t, int order) const;
  Jet log_alpha_jet(double t, int order) const;
  Jet alpha_jet(double t, int order) const;

  double lambda(double t) const { return lambda_jet(t, 0).value(); }
  double mu(double t) const { return mu_jet(t, 0).value(); }
  double theta(double t) const { return theta_jet(t, 0).value(); }
  double alpha(double t) const { return alpha_jet(t, 0).value(); }

 private:
  Jet f_jet(double t, int order) const;

  ScalarField f_;
  double c_;
  Interval I_;
  Subcase subcase_;
  int eps_;
  double sign_ = 1.0;
  CumulativeIntegral log_alpha_;
};

/// Grid maxima of the algebraic identities the construction relies on.
struct ShapeChecks {
  /// Shape relations, relative.
  double relscurta = 0.0;
  /// theta' + mu (S21), theta' - mu (S22b/c), alpha'/alpha - mu (S22a).
  double theta = 0.0;
  /// d/dt of the closed-form primitive minus the integrand.
  double primitive = 0.0;
};
ShapeChecks shape_checks(const ShapeModel& m, int grid = 256);

/// The generator profiles (f1, f2) for the model's subcase, integrals anchored
/// at t0; the closed-form primitive fixes the radial constant.
std::pair<std::shared_ptr<const Profile>, std::shared_ptr<const Profile>> reconstruction_profiles(
    const std::shared_ptr<const ShapeModel>& m);

struct Reconstruction {
  std::shared_ptr<const ShapeModel> shape;
  RotationalSpec witness;
  ImmersionSpec immersion;
};

/// Default ambient signature: fiber index plus one when eps_tilde = -1.
Signature default_signature(Subcase s, int n, int fiber_index = 0);

/// Needs the rotational branch (InvalidSpec otherwise) and n >= 2.
Reconstruction reconstruct_immersion(const ScalarField& f, double c, const Interval& I, int n,
                                     std::optional<Signature> sig = std::nullopt,
                                     const PipelineOptions& opts = {});

struct PsiPhi {
  Vector psi;
  Vector phi;
  double psi_length = 0.0;
  double phi_length = 0.0;
  /// Max-norm of the central-difference derivatives of psi, t and u directions.
  double dpsi_t = 0.0;
  double dpsi_u = 0.0;
  /// Same for phi along t.
  double dphi_t = 0.0;
};

/// psi and phi at p = (t, u) assembled from E_1 = dF/dt and the unit normal
/// oriented so that the vertical principal curvature has the model's sign.
PsiPhi psi_phi_fields(const ShapeModel& m, const ImmersionSpec& rebuilt, std::span<const double> p,
                      double h = 1e-4);

/// <psi, psi> and <phi, phi> implied by the definitions of psi and phi.
std::pair<double, double> expected_lengths(Subcase s);

struct NamedResidual {
  std::string name;
  double value = 0.0;
  double tol = 0.0;
  bool pass() const { return value <= tol; }
};

struct VerificationReport {
  static constexpr int schema_version = 1;
  Branch branch = Branch::Rotational;
  std::optional<double> K;
  std::optional<Subcase> subcase;
  int eps_tilde = 0;
  int n = 0;
  std::optional<Signature> sig;
  int samples = 0;
  std::uint64_t seed = 0;
  std::optional<double> psi_length;
  std::optional<double> phi_length;
  std::vector<NamedResidual> residuals;

  bool verdict() const;
  const NamedResidual* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Compares a rebuilt immersion with the warped product it should realize.
/// Failures are verdicts, not exceptions.
VerificationReport verify_reconstruction(const WarpedSpec& original, const Reconstruction& rebuilt,
                                         const PipelineOptions& opts = {});

/// classify -> case-1 checks, or reconstruct -> verify.
VerificationReport run_pipeline(const WarpedSpec& spec, std::optional<Signature> sig = std::nullopt,
                                const PipelineOptions& opts = {});

}  // namespace warphyp
