#include "warphyp/rotational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "warphyp/error.hpp"
#include "warphyp/hypersurface.hpp"

namespace warphyp {
namespace {

constexpr const char* kModule = "rotational";
constexpr Interval kRadial{0.2, 1.2};
constexpr Interval kPolar{0.3, std::numbers::pi - 0.3};
constexpr Interval kAzimuth{-2.5, 2.5};
constexpr Interval kParabolic{-1.0, 1.0};

// Unit vector in m slots from m - 1 hyperspherical angles.
std::vector<Jet> hyperspherical(std::span<const Jet> angles, int m, const JetLayout& layout) {
  std::vector<Jet> w;
  if (m == 0) return w;
  Jet prod(layout, 1.0);
  for (int i = 0; i < m - 1; ++i) {
    w.push_back(prod * cos(angles[i]));
    prod = prod * sin(angles[i]);
  }
  w.push_back(prod);
  return w;
}

struct Blocks {
  std::vector<int> pos, neg;
};

Blocks split(std::span<const int> signs) {
  Blocks b;
  for (int i = 0; i < static_cast<int>(signs.size()); ++i) (signs[i] > 0 ? b.pos : b.neg).push_back(i);
  return b;
}

int orbit_dim(OrbitForm form, std::span<const int> signs) {
  return form == OrbitForm::Parabolic ? static_cast<int>(signs.size()) - 2 : static_cast<int>(signs.size()) - 1;
}

class RotationalSource final : public ImmersionSource {
 public:
  RotationalSource(RotationalSpec spec, std::vector<int> signs) : spec_(std::move(spec)), signs_(std::move(signs)) {}

  std::vector<Jet> evaluate(std::span<const double> p, int order) const override {
    const int n = spec_.n();
    const auto& L = JetLayout::get(n, order);
    const Jet t = Jet::variable(L, 0, p[0]);
    const Jet f1 = compose(t, spec_.f1->jet(p[0], order).coefficients());
    const Jet f2 = compose(t, spec_.f2->jet(p[0], order).coefficients());
    std::vector<Jet> u;
    for (int i = 1; i < n; ++i) u.push_back(Jet::variable(L, i, p[i]));
    const auto y = orbit_chart(spec_.orbit, signs_, u);
    std::vector<Jet> x;
    x.reserve(static_cast<std::size_t>(n) + 1);
    switch (spec_.axis) {
      case AxisType::Spacelike:
        x.push_back(f1);
        for (const auto& yi : y) x.push_back(f2 * yi);
        break;
      case AxisType::Timelike:
        for (const auto& yi : y) x.push_back(f1 * yi);
        x.push_back(f2);
        break;
      case AxisType::Null:
        for (int i = 0; i <= n; ++i) {
          Jet xi = f2 * y[i];
          if (i == 0 || i == n) xi += f1;
          x.push_back(std::move(xi));
        }
        break;
    }
    return x;
  }

  nlohmann::json describe() const override { return to_json(spec_); }

 private:
  RotationalSpec spec_;
  std::vector<int> signs_;
};

}  // namespace

const char* to_string(AxisType a) noexcept {
  switch (a) {
    case AxisType::Spacelike: return "spacelike";
    case AxisType::Timelike: return "timelike";
    case AxisType::Null: return "null";
  }
  return "?";
}

const char* to_string(OrbitForm o) noexcept {
  switch (o) {
    case OrbitForm::UnitSphere: return "sphere";
    case OrbitForm::UnitHyperbolic: return "hyperbolic";
    case OrbitForm::Parabolic: return "parabolic";
  }
  return "?";
}

AxisType axis_from_string(const std::string& s) {
  if (s == "spacelike") return AxisType::Spacelike;
  if (s == "timelike") return AxisType::Timelike;
  if (s == "null") return AxisType::Null;
  throw Error(ErrorKind::InvalidSpec, kModule, "axis", "unknown axis type " + s);
}

OrbitForm orbit_from_string(const std::string& s) {
  if (s == "sphere") return OrbitForm::UnitSphere;
  if (s == "hyperbolic") return OrbitForm::UnitHyperbolic;
  if (s == "parabolic") return OrbitForm::Parabolic;
  throw Error(ErrorKind::InvalidSpec, kModule, "orbit", "unknown orbit form " + s);
}

ExpressionProfile::ExpressionProfile(ScalarField field) : field_(std::move(field)) {
  if (field_.arity() != 1) throw Error(ErrorKind::InvalidSpec, kModule, "profile", "profile must depend on t only");
}

Jet ExpressionProfile::jet(double t, int order) const {
  const double p[1] = {t};
  return eval_jet(field_, p, order);
}

nlohmann::json ExpressionProfile::describe() const { return {{"kind", "expression"}, {"expr", field_.print()}}; }

PrimitiveProfile::PrimitiveProfile(IntegrandJet integrand, double constant, Interval range, std::string label,
                                   QuadratureOptions opts, int nodes)
    : integrand_(std::move(integrand)), constant_(constant), range_(range), label_(std::move(label)) {
  auto g = integrand_;
  integral_ = CumulativeIntegral([g](double s) { return g(s, 0).value(); }, range.lo, range.hi, nodes, opts);
}

Jet PrimitiveProfile::jet(double t, int order) const {
  const double v = constant_ + integral_(t);
  if (order == 0) return Jet(JetLayout::get(1, 0), v);
  return integrate_univariate(integrand_(t, order - 1), v);
}

nlohmann::json PrimitiveProfile::describe() const {
  return {{"kind", "primitive"}, {"integrand", label_}, {"constant", constant_}, {"anchor", range_.lo}};
}

std::shared_ptr<const Profile> expression_profile(const std::string& src) {
  return std::make_shared<ExpressionProfile>(parse(src, {"t"}));
}

std::vector<int> orbit_signs(AxisType axis, const Signature& sig) {
  const int m = sig.ambient_dim();
  std::vector<int> s;
  const int lo = axis == AxisType::Spacelike ? 1 : 0;
  const int hi = axis == AxisType::Timelike ? m - 1 : m;
  for (int i = lo; i < hi; ++i) s.push_back(sig.eps(i));
  return s;
}

std::vector<Interval> orbit_domain(OrbitForm form, std::span<const int> signs) {
  std::vector<Interval> d;
  if (form == OrbitForm::Parabolic) {
    d.assign(static_cast<std::size_t>(std::max(0, orbit_dim(form, signs))), kParabolic);
    return d;
  }
  const Blocks b = split(signs);
  const int p = static_cast<int>(b.pos.size()), q = static_cast<int>(b.neg.size());
  if (p > 0 && q > 0) d.push_back(kRadial);
  for (int m : {p, q})
    for (int i = 0; i + 1 < m; ++i) d.push_back(i + 2 < m ? kPolar : kAzimuth);
  return d;
}

std::vector<Jet> orbit_chart(OrbitForm form, std::span<const int> signs, std::span<const Jet> u) {
  const int m = static_cast<int>(signs.size());
  const int k = orbit_dim(form, signs);
  if (k < 1) throw Error(ErrorKind::InvalidSpec, kModule, "orbit_chart", "orbit dimension must be >= 1");
  if (static_cast<int>(u.size()) != k) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "orbit_chart", "expected " + std::to_string(k) + " chart variables");
  }
  const auto dom = orbit_domain(form, signs);
  for (int i = 0; i < k; ++i) {
    const double x = u[i].value();
    const double slack = 1e-9 * dom[i].width();
    if (x < dom[i].lo - slack || x > dom[i].hi + slack) {
      throw Error(ErrorKind::OutOfDomain, kModule, "orbit_chart", "chart variable outside its box");
    }
  }
  const JetLayout& L = u[0].layout();
  std::vector<Jet> y(static_cast<std::size_t>(m), Jet(L, 0.0));

  if (form == OrbitForm::Parabolic) {
    if (signs.front() != 1 || signs.back() != -1) {
      throw Error(ErrorKind::InvalidSpec, kModule, "orbit_chart", "parabolic orbit needs a null plane (e_1, e_{n+1})");
    }
    Jet Q(L, 0.0);
    for (int i = 1; i + 1 < m; ++i) {
      Q += u[i - 1] * u[i - 1] * static_cast<double>(signs[i]);
      y[i] = u[i - 1];
    }
    y[0] = 1.0 - 0.25 * Q;
    y[m - 1] = -1.0 - 0.25 * Q;
    return y;
  }

  const Blocks b = split(signs);
  const int p = static_cast<int>(b.pos.size()), q = static_cast<int>(b.neg.size());
  const bool sphere = form == OrbitForm::UnitSphere;
  // The "main" block carries cosh (or the bare unit vector), the other sinh.
  const auto& main_idx = sphere ? b.pos : b.neg;
  if (main_idx.empty()) {
    throw Error(ErrorKind::InvalidSpec, kModule, "orbit_chart",
                sphere ? "sphere-like orbit needs a positive slot" : "hyperbolic orbit needs a negative slot");
  }
  std::size_t next = 0;
  Jet ch(L, 1.0), sh(L, 0.0);
  if (p > 0 && q > 0) {
    ch = cosh(u[0]);
    sh = sinh(u[0]);
    next = 1;
  }
  const auto wp = hyperspherical(u.subspan(next, static_cast<std::size_t>(std::max(p - 1, 0))), p, L);
  next += static_cast<std::size_t>(std::max(p - 1, 0));
  const auto wq = hyperspherical(u.subspan(next, static_cast<std::size_t>(std::max(q - 1, 0))), q, L);
  const Jet& sp = sphere ? ch : sh;
  const Jet& sq = sphere ? sh : ch;
  for (int i = 0; i < p; ++i) y[b.pos[i]] = sp * wp[i];
  for (int i = 0; i < q; ++i) y[b.neg[i]] = sq * wq[i];
  return y;
}

Vector orbit_point(OrbitForm form, std::span<const int> signs, std::span<const double> u) {
  const auto& L = JetLayout::get(std::max<int>(1, static_cast<int>(u.size())), 0);
  std::vector<Jet> uj;
  for (double x : u) uj.emplace_back(L, x);
  Vector y;
  for (const auto& j : orbit_chart(form, signs, uj)) y.push_back(j.value());
  return y;
}

double orbit_constraint(OrbitForm form, std::span<const int> signs, std::span<const double> y) {
  double q = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) q += signs[i] * y[i] * y[i];
  switch (form) {
    case OrbitForm::UnitSphere: return q - 1.0;
    case OrbitForm::UnitHyperbolic: return q + 1.0;
    case OrbitForm::Parabolic: return std::max(std::fabs(q), std::fabs(y.front() - y.back() - 2.0));
  }
  return q;
}

ImmersionSpec make_immersion(const RotationalSpec& spec) {
  if (!spec.f1 || !spec.f2) throw Error(ErrorKind::InvalidSpec, kModule, "make_immersion", "missing profile");
  const int n = spec.n();
  if (n < 2) throw Error(ErrorKind::InvalidSpec, kModule, "make_immersion", "need n >= 2");
  const bool null_axis = spec.axis == AxisType::Null;
  if (null_axis != (spec.orbit == OrbitForm::Parabolic)) {
    throw Error(ErrorKind::InvalidSpec, kModule, "make_immersion", "parabolic orbits go with the null axis only");
  }
  if (spec.axis != AxisType::Spacelike && spec.sig.index() < 1) {
    throw Error(ErrorKind::InvalidSpec, kModule, "make_immersion",
                std::string(to_string(spec.axis)) + " axis needs signature index >= 1");
  }
  if (spec.axis == AxisType::Spacelike && spec.sig.index() > n) {
    throw Error(ErrorKind::InvalidSpec, kModule, "make_immersion", "e_1 is timelike when every slot is negative");
  }
  auto signs = orbit_signs(spec.axis, spec.sig);
  std::vector<std::string> vars{"t"};
  for (int i = 1; i < n; ++i) vars.push_back("u" + std::to_string(i));
  std::vector<Interval> dom{spec.t_range};
  for (const auto& iv : orbit_domain(spec.orbit, signs)) dom.push_back(iv);
  // Validates the (form, signs) pairing.
  const auto& L = JetLayout::get(n - 1, 0);
  std::vector<Jet> probe;
  for (int i = 1; i < n; ++i) probe.emplace_back(L, 0.5 * (dom[i].lo + dom[i].hi));
  orbit_chart(spec.orbit, signs, probe);
  const std::string name = std::string("rotational-") + to_string(spec.axis) + "-" + to_string(spec.orbit);
  return ImmersionSpec(name, spec.sig, std::move(vars), std::move(dom),
                       std::make_shared<RotationalSource>(spec, std::move(signs)));
}

namespace {

ImmersionSpec generate_checked(RotationalSpec spec) {
  auto F = make_immersion(spec);
  Vector center;
  for (const auto& iv : F.domain()) center.push_back(0.5 * (iv.lo + iv.hi));
  induced_metric(F, center);
  return F;
}

}  // namespace

ImmersionSpec generate_case1(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, OrbitForm orbit,
                             Signature sig, Interval t_range) {
  return generate_checked({AxisType::Spacelike, orbit, std::move(f1), std::move(f2), sig, t_range});
}

ImmersionSpec generate_case2(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, OrbitForm orbit,
                             Signature sig, Interval t_range) {
  return generate_checked({AxisType::Timelike, orbit, std::move(f1), std::move(f2), sig, t_range});
}

ImmersionSpec generate_case3(std::shared_ptr<const Profile> f1, std::shared_ptr<const Profile> f2, Signature sig,
                             Interval t_range) {
  return generate_checked({AxisType::Null, OrbitForm::Parabolic, std::move(f1), std::move(f2), sig, t_range});
}

double rotational_diagnostic(const ImmersionSpec& F, AxisType axis, int samples, double margin) {
  const Signature& sig = F.sig();
  const int m = sig.ambient_dim();
  auto invariants = [&](const Vector& x) -> std::pair<double, double> {
    switch (axis) {
      case AxisType::Spacelike: {
        double q = 0.0;
        for (int i = 1; i < m; ++i) q += sig.eps(i) * x[i] * x[i];
        return {x[0], q};
      }
      case AxisType::Timelike: {
        double q = 0.0;
        for (int i = 0; i + 1 < m; ++i) q += sig.eps(i) * x[i] * x[i];
        return {x[m - 1], q};
      }
      case AxisType::Null: break;
    }
    return {x[0] * sig.eps(0) + x[m - 1] * sig.eps(m - 1), inner(x, x, sig)};
  };
  double worst = 0.0;
  for (const auto& p : sample_points(F.domain(), samples, 0, margin)) {
    Vector ref = p;
    for (std::size_t i = 1; i < ref.size(); ++i) ref[i] = 0.5 * (F.domain()[i].lo + F.domain()[i].hi);
    const auto [a, b] = invariants(F.position(p));
    const auto [ar, br] = invariants(F.position(ref));
    worst = std::max(worst, std::fabs(a - ar) / std::max(1.0, std::fabs(ar)));
    worst = std::max(worst, std::fabs(b - br) / std::max(1.0, std::fabs(br)));
  }
  return worst;
}

double rotational_diagnostic(const ImmersionSpec& F, const RotationalSpec& spec, int samples, double margin) {
  if (!(F.sig() == spec.sig)) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "rotational_diagnostic", "signature mismatch");
  }
  return rotational_diagnostic(F, spec.axis, samples, margin);
}

nlohmann::json to_json(const RotationalSpec& spec) {
  return {{"axis", to_string(spec.axis)},
          {"orbit", to_string(spec.orbit)},
          {"signature", {spec.sig.ambient_dim(), spec.sig.index()}},
          {"t_range", {spec.t_range.lo, spec.t_range.hi}},
          {"f1", spec.f1 ? spec.f1->describe() : nlohmann::json()},
          {"f2", spec.f2 ? spec.f2->describe() : nlohmann::json()}};
}

RotationalSpec rotational_from_json(const nlohmann::json& j) {
  auto profile = [](const nlohmann::json& p) -> std::shared_ptr<const Profile> {
    if (p.is_string()) return expression_profile(p.get<std::string>());
    if (p.is_object() && p.value("kind", "expression") == "expression" && p.contains("expr")) {
      return expression_profile(p.at("expr").get<std::string>());
    }
    throw Error(ErrorKind::InvalidSpec, kModule, "rotational_from_json", "profiles must be expressions");
  };
  try {
    RotationalSpec s;
    s.axis = axis_from_string(j.at("axis").get<std::string>());
    s.orbit = orbit_from_string(j.at("orbit").get<std::string>());
    const auto sig = j.at("signature");
    s.sig = Signature(sig.at(0).get<int>(), sig.at(1).get<int>());
    const auto tr = j.at("t_range");
    s.t_range = {tr.at(0).get<double>(), tr.at(1).get<double>()};
    s.f1 = profile(j.at("f1"));
    s.f2 = profile(j.at("f2"));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidSpec, kModule, "rotational_from_json", e.what());
  }
}

}  // namespace warphyp
