#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "warphyp/expr.hpp"
#include "warphyp/jet.hpp"
#include "warphyp/pseudolinalg.hpp"

namespace warphyp {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// Something that can produce the Taylor jets of a map R^n -> R^{n+1}.
class ImmersionSource {
 public:
  virtual ~ImmersionSource() = default;
  /// n+1 jets of the given order in the n chart variables at p.
  virtual std::vector<Jet> evaluate(std::span<const double> p, int order) const = 0;
  /// Machine-readable description for reports and spec files.
  virtual nlohmann::json describe() const = 0;
};

/// F : chart box in R^n -> E^{n+1}_s.
class ImmersionSpec {
 public:
  ImmersionSpec() = default;
  ImmersionSpec(std::string name, Signature sig, std::vector<std::string> vars, std::vector<Interval> domain,
                std::shared_ptr<const ImmersionSource> source);

  /// Components given as DSL strings over `vars`.
  static ImmersionSpec from_expressions(std::string name, Signature sig, std::vector<std::string> vars,
                                        const std::vector<std::string>& components, std::vector<Interval> domain);

  const std::string& name() const noexcept { return name_; }
  int chart_dim() const noexcept { return static_cast<int>(vars_.size()); }
  const Signature& sig() const noexcept { return sig_; }
  const std::vector<std::string>& variables() const noexcept { return vars_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }

  std::vector<Jet> jets(std::span<const double> p, int order) const;
  Vector position(std::span<const double> p) const;
  nlohmann::json describe() const;

 private:
  std::string name_;
  Signature sig_;
  std::vector<std::string> vars_;
  std::vector<Interval> domain_;
  std::shared_ptr<const ImmersionSource> source_;
};

/// Immersion whose components are DSL expressions.
class ExpressionSource final : public ImmersionSource {
 public:
  explicit ExpressionSource(std::vector<ScalarField> components) : components_(std::move(components)) {}
  std::vector<Jet> evaluate(std::span<const double> p, int order) const override;
  nlohmann::json describe() const override;

 private:
  std::vector<ScalarField> components_;
};

/// Named fixture immersions: plane, polar, graph, sphere, hyperbolic_plane, cylinder,
/// cone, null_case3, perturbed_graph. Unknown parameters are rejected.
ImmersionSpec builtin_immersion(const std::string& name, const std::map<std::string, double>& params = {});
std::vector<std::string> builtin_immersion_names();

/// Deterministic low-discrepancy (Halton) points in the box shrunk by
/// `margin` on every side; `seed` applies a Cranley-Patterson rotation.
std::vector<Vector> sample_points(std::span<const Interval> box, int count, std::uint64_t seed, double margin = 1e-2);

}  // namespace warphyp
