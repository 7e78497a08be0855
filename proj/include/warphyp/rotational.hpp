#pragma once

// Rotational hypersurfaces of E^{n+1}_s about a spacelike (e_1), timelike
// (e_{n+1}) or null (n_1 = e_1 + e_{n+1}) axis.
//
// Orbit charts. Let the orbit slots carry p positive and q negative signs.
//   sphere-like  (sum eps y^2 = +1): y_P = cosh(r) w_P, y_Q = sinh(r) w_Q
//   hyperbolic   (sum eps y^2 = -1): y_P = sinh(r) w_P, y_Q = cosh(r) w_Q
// where w_P, w_Q are hyperspherical unit vectors (cos a1, sin a1 cos a2, ...).
// The radial variable r is dropped when the opposite block is empty. Chart
// variables are ordered r, then the angles of the P block, then those of Q.
//   parabolic: (1 - Q/4, v_2, ..., v_n, -1 - Q/4) with Q = sum_{i=2}^n eps_i v_i^2.

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "warphyp/expr.hpp"
#include "warphyp/immersion.hpp"
#include "warphyp/jet.hpp"
#include "warphyp/quadrature.hpp"

namespace warphyp {

enum class AxisType { Spacelike, Timelike, Null };
enum class OrbitForm { UnitSphere, UnitHyperbolic, Parabolic };

const char* to_string(AxisType a) noexcept;
const char* to_string(OrbitForm o) noexcept;
AxisType axis_from_string(const std::string& s);
OrbitForm orbit_from_string(const std::string& s);

/// A real function of t with jets up to order 3.
class Profile {
 public:
  virtual ~Profile() = default;
  /// Univariate jet at t.
  virtual Jet jet(double t, int order) const = 0;
  virtual nlohmann::json describe() const = 0;
  double value(double t) const { return jet(t, 0).value(); }
};

class ExpressionProfile final : public Profile {
 public:
  /// `field` must have the single variable t.
  explicit ExpressionProfile(ScalarField field);
  Jet jet(double t, int order) const override;
  nlohmann::json describe() const override;
  const ScalarField& field() const noexcept { return field_; }

 private:
  ScalarField field_;
};

/// constant + int_{anchor}^t g(s) ds, by cumulative adaptive Simpson for the
/// value and by integrating the jet of g for derivatives.
class PrimitiveProfile final : public Profile {
 public:
  using IntegrandJet = std::function<Jet(double t, int order)>;
  PrimitiveProfile(IntegrandJet integrand, double constant, Interval range, std::string label,
                   QuadratureOptions opts = {}, int nodes = 256);
  Jet jet(double t, int order) const override;
  nlohmann::json describe() const override;

 private:
  IntegrandJet integrand_;
  double constant_;
  Interval range_;
  std::string label_;
  CumulativeIntegral integral_;
};

std::shared_ptr<const Profile> expression_profile(const std::string& src);

struct RotationalSpec {
  AxisType axis = AxisType::Spacelike;
  OrbitForm orbit = OrbitForm::UnitSphere;
  std::shared_ptr<const Profile> f1;
  std::shared_ptr<const Profile> f2;
  Signature sig;
  Interval t_range{0.0, 1.0};
  /// Hypersurface dimension n = sig.ambient_dim() - 1.
  int n() const noexcept { return sig.ambient_dim() - 1; }
};

/// Signs of the orbit slots for a given axis.
std::vector<int> orbit_signs(AxisType axis, const Signature& sig);

/// y(u) as jets; u are the orbit chart variables (count = orbit dimension).
/// Throws InvalidSpec for inadmissible (form, signs) and OutOfDomain when a
/// chart value is outside orbit_domain.
std::vector<Jet> orbit_chart(OrbitForm form, std::span<const int> signs, std::span<const Jet> u);
Vector orbit_point(OrbitForm form, std::span<const int> signs, std::span<const double> u);
/// Default chart box with the singular loci excluded.
std::vector<Interval> orbit_domain(OrbitForm form, std::span<const int> signs);
/// sum eps y^2 - 1, sum eps y^2 + 1, or the parabolic residual max(|<w,w>|, |<n1,w> - 2|).
double orbit_constraint(OrbitForm form, std::span<const int> signs, std::span<const double> y);

ImmersionSpec make_immersion(const RotationalSpec& spec);

/// Axis e_1; f1 axial, f2 radial.
ImmersionSpec generate_case1(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, OrbitForm orbit,
                             Signature sig, Interval t_range);
/// Axis e_{n+1}; f1 radial, f2 axial. Needs index >= 1.
ImmersionSpec generate_case2(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, OrbitForm orbit,
                             Signature sig, Interval t_range);
/// f1 n_1 + f2 w(v). Needs index >= 1.
ImmersionSpec generate_case3(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, Signature sig,
                             Interval t_range);

/// Deviation of the axis invariants from functions of t alone, over
/// quasi-random samples of F's domain.
double rotational_diagnostic(const ImmersionSpec& F, AxisType axis, int samples = 64, double margin = 1e-2);
/// Same, with the axis taken from `spec`; DimensionMismatch if the ambient spaces differ.
double rotational_diagnostic(const ImmersionSpec& F, const RotationalSpec& spec, int samples = 64,
                             double margin = 1e-2);

nlohmann::json to_json(const RotationalSpec& spec);
/// Expression profiles only.
RotationalSpec rotational_from_json(const nlohmann::json& j);

}  // namespace warphyp
