#include "warphyp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "warphyp/error.hpp"
#include "warphyp/hypersurface.hpp"
#include "warphyp/parallel.hpp"

namespace warphyp {
namespace {

constexpr const char* kModule = "pipeline";

[[noreturn]] void fail(ErrorKind k, const char* op, const std::string& detail) {
  throw Error(k, kModule, op, detail);
}

std::string at(double t) { return " at t = " + std::to_string(t); }

}  // namespace

const char* to_string(Branch b) noexcept {
  return b == Branch::ConstantCurvature ? "ConstantCurvature" : "Rotational";
}

const char* to_string(Subcase s) noexcept {
  switch (s) {
    case Subcase::S21: return "S21";
    case Subcase::S22a: return "S22a";
    case Subcase::S22b: return "S22b";
    case Subcase::S22c: return "S22c";
  }
  return "?";
}

Subcase subcase_from_string(const std::string& s) {
  for (Subcase c : {Subcase::S21, Subcase::S22a, Subcase::S22b, Subcase::S22c})
    if (s == to_string(c)) return c;
  fail(ErrorKind::InvalidSpec, "subcase", "unknown subcase " + s);
}

namespace {

struct TolEntry {
  const char* name;
  double Tolerances::*field;
};

constexpr TolEntry kTolTable[] = {
    {"branch", &Tolerances::branch},
    {"band", &Tolerances::band},
    {"case1", &Tolerances::case1},
    {"case1_identity", &Tolerances::case1_identity},
    {"relscurta", &Tolerances::relscurta},
    {"theta", &Tolerances::theta},
    {"primitive", &Tolerances::primitive},
    {"psi", &Tolerances::psi},
    {"psi_length", &Tolerances::psi_length},
    {"metric", &Tolerances::metric},
    {"spectrum", &Tolerances::spectrum},
    {"identity", &Tolerances::identity},
};

}  // namespace

void Tolerances::set(const std::string& name, double value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::ConfigError, kModule, "tolerances", "tolerance " + name + " must be finite and >= 0");
  }
  for (const auto& e : kTolTable)
    if (name == e.name) {
      this->*e.field = value;
      return;
    }
  throw Error(ErrorKind::ConfigError, kModule, "tolerances", "unknown tolerance " + name);
}

double Tolerances::get(const std::string& name) const {
  for (const auto& e : kTolTable)
    if (name == e.name) return this->*e.field;
  throw Error(ErrorKind::ConfigError, kModule, "tolerances", "unknown tolerance " + name);
}

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> n = [] {
    std::vector<std::string> v;
    for (const auto& e : kTolTable) v.emplace_back(e.name);
    return v;
  }();
  return n;
}

std::vector<double> grid_points(const Interval& I, int count) {
  if (count < 2) fail(ErrorKind::InvalidSpec, "grid", "grid needs at least two points");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[i] = I.lo + (I.hi - I.lo) * i / (count - 1);
  g.back() = I.hi;
  return g;
}

std::array<double, 3> warp_values(const ScalarField& f, double t) {
  if (f.arity() != 1) fail(ErrorKind::InvalidSpec, "warp_values", "warping function must depend on t only");
  const double p[1] = {t};
  const Jet j = eval_jet(f, p, 2);
  return {j.value(), j.partial({0}), j.partial({0, 0})};
}

namespace {

void check_interval(const Interval& I, const char* op) {
  if (!(I.lo < I.hi) || !std::isfinite(I.lo) || !std::isfinite(I.hi)) {
    fail(ErrorKind::InvalidSpec, op, "interval must satisfy lo < hi");
  }
}

// Theorem hypotheses: f > 0 and f' not identically zero.
std::vector<std::array<double, 3>> sample_warp(const ScalarField& f, const Interval& I, int grid, double tol,
                                               const char* op) {
  check_interval(I, op);
  std::vector<std::array<double, 3>> v;
  double fmax = 0.0, dmax = 0.0;
  for (double t : grid_points(I, grid)) {
    const auto w = warp_values(f, t);
    if (!(w[0] > 0.0)) fail(ErrorKind::NonPositiveWarp, op, "f must be positive" + at(t));
    fmax = std::max(fmax, w[0]);
    dmax = std::max(dmax, std::fabs(w[1]));
    v.push_back(w);
  }
  if (dmax <= tol * fmax) fail(ErrorKind::ConstantWarp, op, "f' vanishes on the whole interval");
  return v;
}

}  // namespace

Case1Result case1_curvature(const ScalarField& f, double c, const Interval& I, int grid, const Tolerances& tol) {
  const auto w = sample_warp(f, I, grid, tol.branch, "case1_curvature");
  Case1Result r;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  for (const auto& [f0, f1, f2] : w) {
    const double k = -f2 / f0;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
    sum += k;
    r.identity_residual = std::max(r.identity_residual, std::fabs(k - (c - f1 * f1) / (f0 * f0)));
  }
  r.K = sum / static_cast<double>(w.size());
  r.spread = hi - lo;
  if (r.spread > tol.case1 * std::max(1.0, std::fabs(r.K))) {
    fail(ErrorKind::NotConstant, "case1_curvature",
         "-f''/f varies by " + std::to_string(r.spread) + " on the interval");
  }
  return r;
}

LambdaMu solve_lambda_mu(const ScalarField& f, double c, double t) {
  const auto [f0, f1, f2] = warp_values(f, t);
  if (!(f0 > 0.0)) fail(ErrorKind::NonPositiveWarp, "solve_lambda_mu", "f must be positive" + at(t));
  const double num = c - f1 * f1;
  if (std::fabs(num) <= 1e-14 * std::max(std::fabs(c), f1 * f1) || num == 0.0) {
    fail(ErrorKind::ZeroLambda, "solve_lambda_mu", "c - f'^2 vanishes" + at(t));
  }
  LambdaMu r;
  const double q = num / (f0 * f0);
  r.eps_tilde = q > 0 ? 1 : -1;
  r.lambda = std::sqrt(r.eps_tilde * q);
  r.mu = -f2 / (r.eps_tilde * f0 * r.lambda);
  const double a = -r.eps_tilde * r.mu * r.lambda, b = f2 / f0;
  const double s1 = std::max(std::fabs(a), std::fabs(b));
  const double e1 = s1 > 0.0 ? std::fabs(a - b) / s1 : 0.0;
  const double e2 = std::fabs(r.eps_tilde * r.lambda * r.lambda - q) / std::fabs(q);
  r.residual = std::max(e1, e2);
  return r;
}

Subcase subcase_dispatch(const ScalarField& f, double c, const Interval& I, int grid, const Tolerances& tol) {
  const auto w = sample_warp(f, I, grid, tol.branch, "subcase_dispatch");
  const auto ts = grid_points(I, grid);
  int eps = 0;
  std::optional<Subcase> seen;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const LambdaMu lm = solve_lambda_mu(f, c, ts[i]);
    if (eps == 0) eps = lm.eps_tilde;
    if (lm.eps_tilde != eps) fail(ErrorKind::SignChange, "subcase_dispatch", "sign of c - f'^2 changes" + at(ts[i]));
    Subcase s = Subcase::S21;
    if (eps < 0) {
      const double ratio = std::fabs(w[i][1]) / (w[i][0] * lm.lambda);
      s = std::fabs(ratio - 1.0) <= tol.band ? Subcase::S22a : (ratio < 1.0 ? Subcase::S22b : Subcase::S22c);
    }
    if (seen && *seen != s) {
      fail(ErrorKind::SubcaseChange, "subcase_dispatch",
           std::string("|f'/(f lambda)| moves from ") + to_string(*seen) + " to " + to_string(s) + at(ts[i]));
    }
    seen = s;
  }
  return *seen;
}

BranchResult classify_branch(const ScalarField& f, double c, const Interval& I, int grid, const Tolerances& tol) {
  const auto w = sample_warp(f, I, grid, tol.branch, "classify_branch");
  int zero = 0, pos = 0, neg = 0;
  for (const auto& [f0, f1, f2] : w) {
    const double d = c + f2 * f0 - f1 * f1;
    const double scale = std::max({std::fabs(c), std::fabs(f2 * f0), f1 * f1});
    if (std::fabs(d) <= tol.branch * scale) ++zero;
    else (d > 0 ? pos : neg)++;
  }
  const int total = static_cast<int>(w.size());
  BranchResult r;
  if (zero == total) {
    r.branch = Branch::ConstantCurvature;
    r.K = case1_curvature(f, c, I, grid, tol).K;
    return r;
  }
  if (zero > 0 || (pos > 0 && neg > 0)) {
    fail(ErrorKind::MixedBranch, "classify_branch", "c + f''f - f'^2 vanishes on part of the interval only");
  }
  r.branch = Branch::Rotational;
  r.subcase = subcase_dispatch(f, c, I, grid, tol);
  r.eps_tilde = *r.subcase == Subcase::S21 ? 1 : -1;
  return r;
}


namespace {

Jet warp_jet(const ScalarField& f, double t, int order) {
  const double p[1] = {t};
  return eval_jet(f, p, order);
}

// Construction lambda: sign * sqrt(e (c - f'^2) / f^2).
Jet lambda_impl(const ScalarField& f, double c, int eps, double sign, double t, int order) {
  const Jet F = warp_jet(f, t, order + 1);
  const Jet Fp = F.differentiate(0);
  const Jet F0 = F.truncate(order);
  const Jet q = static_cast<double>(eps) * (c - Fp * Fp) / (F0 * F0);
  if (!(q.value() > 0.0)) fail(ErrorKind::ZeroLambda, "shape_model", "lambda^2 is not positive" + at(t));
  return sign * sqrt(q);
}

Jet mu_impl(const ScalarField& f, double c, int eps, double sign, double t, int order) {
  const Jet F = warp_jet(f, t, order + 2);
  const Jet Fpp = F.differentiate(0).differentiate(0);
  const Jet L = lambda_impl(f, c, eps, sign, t, order);
  return -Fpp / (static_cast<double>(eps) * F.truncate(order) * L);
}

}  // namespace

ShapeModel::ShapeModel(ScalarField f, double c, Interval I, Subcase subcase, QuadratureOptions q, int nodes)
    : f_(std::move(f)), c_(c), I_(I), subcase_(subcase), eps_(subcase == Subcase::S21 ? 1 : -1) {
  check_interval(I_, "shape_model");
  if (f_.arity() != 1) fail(ErrorKind::InvalidSpec, "shape_model", "warping function must depend on t only");
  if (subcase_ == Subcase::S22a) {
    sign_ = warp_values(f_, I_.lo)[1] < 0.0 ? -1.0 : 1.0;
    auto g = [f = f_, c = c_, e = eps_, s = sign_](double t) { return mu_impl(f, c, e, s, t, 0).value(); };
    log_alpha_ = CumulativeIntegral(g, I_.lo, I_.hi, nodes, q);
  }
}

Jet ShapeModel::f_jet(double t, int order) const {
  const double slack = 1e-9 * I_.width();
  if (t < I_.lo - slack || t > I_.hi + slack) fail(ErrorKind::OutOfDomain, "shape_model", "t outside I" + at(t));
  return warp_jet(f_, t, order);
}

Jet ShapeModel::lambda_jet(double t, int order) const {
  f_jet(t, 0);
  return lambda_impl(f_, c_, eps_, sign_, t, order);
}

Jet ShapeModel::mu_jet(double t, int order) const {
  f_jet(t, 0);
  return mu_impl(f_, c_, eps_, sign_, t, order);
}

Jet ShapeModel::theta_jet(double t, int order) const {
  if (subcase_ == Subcase::S22a) fail(ErrorKind::InvalidSpec, "build_theta", "S22a uses alpha, not theta");
  const Jet F = f_jet(t, order + 1);
  const Jet r = F.differentiate(0) / (F.truncate(order) * lambda_jet(t, order));
  switch (subcase_) {
    case Subcase::S21: return atan(r);
    case Subcase::S22b: return atanh(r);
    default: return atanh(1.0 / r);
  }
}

Jet ShapeModel::log_alpha_jet(double t, int order) const {
  if (subcase_ != Subcase::S22a) fail(ErrorKind::InvalidSpec, "build_theta", "alpha exists in S22a only");
  f_jet(t, 0);
  const double L = log_alpha_(t);
  if (order == 0) return Jet(JetLayout::get(1, 0), L);
  return integrate_univariate(mu_jet(t, order - 1), L);
}

Jet ShapeModel::alpha_jet(double t, int order) const { return exp(log_alpha_jet(t, order)); }

ShapeChecks shape_checks(const ShapeModel& m, int grid) {
  ShapeChecks out;
  const int e = m.eps_tilde();
  const double c = m.c();
  const Interval& I = m.interval();
  auto rel = [](double a, double b, double floor) {
    return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), floor});
  };
  for (double t : grid_points(I, grid)) {
    const auto [f0, f1, f2] = warp_values(m.f(), t);
    const double lam = m.lambda(t), mu = m.mu(t);
    out.relscurta = std::max(out.relscurta, rel(-e * mu * lam, f2 / f0, 1e-300));
    out.relscurta = std::max(out.relscurta, rel(e * lam * lam, (c - f1 * f1) / (f0 * f0), 1e-300));

    const Jet L1 = m.lambda_jet(t, 1);
    if (m.subcase() == Subcase::S22a) {
      // alpha from quadrature, differentiated numerically.
      const double h = 1e-5 * I.width();
      const double tc = std::clamp(t, I.lo + h, I.hi - h);
      const double a = m.alpha(tc);
      const double da = (m.alpha(tc + h) - m.alpha(tc - h)) / (2 * h);
      out.theta = std::max(out.theta, std::fabs(da / a - m.mu(tc)) / std::max(1.0, std::fabs(m.mu(tc))));
      const Jet A = m.alpha_jet(t, 1);
      const Jet P = A / L1;
      out.primitive = std::max(out.primitive, std::fabs(P.partial({0}) - A.value()) / std::max(1.0, A.value()));
      continue;
    }
    const Jet th = m.theta_jet(t, 1);
    const double dth = th.partial({0});
    const double want = m.subcase() == Subcase::S21 ? -mu : mu;
    out.theta = std::max(out.theta, std::fabs(dth - want) / std::max(1.0, std::fabs(mu)));
    Jet P;
    double g = 0.0;
    switch (m.subcase()) {
      case Subcase::S21:
        P = cos(th) / L1;
        g = std::sin(th.value());
        break;
      case Subcase::S22b:
        P = cosh(th) / L1;
        g = std::sinh(th.value());
        break;
      default:
        P = sinh(th) / L1;
        g = std::cosh(th.value());
        break;
    }
    out.primitive = std::max(out.primitive, std::fabs(P.partial({0}) - g) / std::max(1.0, std::fabs(g)));
  }
  return out;
}

std::pair<std::shared_ptr<const Profile>, std::shared_ptr<const Profile>> reconstruction_profiles(
    const std::shared_ptr<const ShapeModel>& m) {
  const Interval I = m->interval();
  const double t0 = m->anchor();
  auto prim = [&](PrimitiveProfile::IntegrandJet g, double constant, const char* label) {
    return std::make_shared<PrimitiveProfile>(std::move(g), constant, I, label);
  };
  switch (m->subcase()) {
    case Subcase::S21: {
      const double th0 = m->theta(t0), l0 = m->lambda(t0);
      return {prim([m](double t, int k) { return cos(m->theta_jet(t, k)); }, 0.0, "cos(theta)"),
              prim([m](double t, int k) { return -sin(m->theta_jet(t, k)); }, -std::cos(th0) / l0, "-sin(theta)")};
    }
    case Subcase::S22b: {
      const double th0 = m->theta(t0), l0 = m->lambda(t0);
      return {prim([m](double t, int k) { return cosh(m->theta_jet(t, k)); }, 0.0, "cosh(theta)"),
              prim([m](double t, int k) { return -sinh(m->theta_jet(t, k)); }, -std::cosh(th0) / l0,
                   "-sinh(theta)")};
    }
    case Subcase::S22c: {
      const double th0 = m->theta(t0), l0 = m->lambda(t0);
      return {prim([m](double t, int k) { return cosh(m->theta_jet(t, k)); }, std::sinh(th0) / l0, "cosh(theta)"),
              prim([m](double t, int k) { return -sinh(m->theta_jet(t, k)); }, 0.0, "-sinh(theta)")};
    }
    case Subcase::S22a: {
      const double l0 = m->lambda(t0);
      return {prim([m](double t, int k) { return 0.5 * exp(-m->log_alpha_jet(t, k)); }, 0.0, "1/(2 alpha)"),
              prim([m](double t, int k) { return 0.5 * m->alpha_jet(t, k); }, 0.5 / l0, "alpha/2")};
    }
  }
  fail(ErrorKind::InvalidSpec, "reconstruct_immersion", "unknown subcase");
}

Signature default_signature(Subcase s, int n, int fiber_index) {
  return Signature(n + 1, fiber_index + (s == Subcase::S21 ? 0 : 1));
}

Reconstruction reconstruct_immersion(const ScalarField& f, double c, const Interval& I, int n,
                                     std::optional<Signature> sig, const PipelineOptions& opts) {
  if (n < 2) fail(ErrorKind::InvalidSpec, "reconstruct_immersion", "need n >= 2");
  const BranchResult br = classify_branch(f, c, I, opts.grid, opts.tol);
  if (br.branch != Branch::Rotational) {
    fail(ErrorKind::InvalidSpec, "reconstruct_immersion", "constant curvature branch has no rotational reconstruction");
  }
  const Subcase s = *br.subcase;
  const Signature S = sig.value_or(default_signature(s, n));
  if (S.ambient_dim() != n + 1) fail(ErrorKind::DimensionMismatch, "reconstruct_immersion", "signature must have n + 1 slots");
  if (br.eps_tilde < 0 && S.index() < 1) {
    fail(ErrorKind::InvalidSpec, "reconstruct_immersion", "a timelike normal needs signature index >= 1");
  }
  auto model = std::make_shared<const ShapeModel>(f, c, I, s, QuadratureOptions{}, opts.grid);
  auto [f1, f2] = reconstruction_profiles(model);
  RotationalSpec w;
  w.f1 = f1;
  w.f2 = f2;
  w.sig = S;
  w.t_range = I;
  switch (s) {
    case Subcase::S21: w.axis = AxisType::Spacelike, w.orbit = OrbitForm::UnitSphere; break;
    case Subcase::S22b: w.axis = AxisType::Spacelike, w.orbit = OrbitForm::UnitHyperbolic; break;
    case Subcase::S22c: w.axis = AxisType::Timelike, w.orbit = OrbitForm::UnitSphere; break;
    case Subcase::S22a: w.axis = AxisType::Null, w.orbit = OrbitForm::Parabolic; break;
  }
  ImmersionSpec F = [&] {
    switch (w.axis) {
      case AxisType::Spacelike: return generate_case1(f1, f2, w.orbit, S, I);
      case AxisType::Timelike: return generate_case2(f1, f2, w.orbit, S, I);
      case AxisType::Null: break;
    }
    return generate_case3(f1, f2, S, I);
  }();
  return {std::move(model), std::move(w), std::move(F)};
}

std::pair<double, double> expected_lengths(Subcase s) {
  switch (s) {
    case Subcase::S21: return {1.0, 1.0};
    case Subcase::S22a: return {0.0, 0.0};
    case Subcase::S22b: return {1.0, -1.0};
    case Subcase::S22c: return {-1.0, 1.0};
  }
  return {0.0, 0.0};
}

namespace {

double max_abs(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

std::pair<Vector, Vector> psi_phi_at(const ShapeModel& m, const ImmersionSpec& F, std::span<const double> p) {
  const FrameData fr = frame_data(F, p);
  const auto jets = F.jets(p, 1);
  const std::size_t dim = jets.size();
  Vector E1(dim);
  for (std::size_t k = 0; k < dim; ++k) E1[k] = jets[k].partial({0});
  const double t = p[0];
  // Orient xi so that the vertical principal curvature H_uu / G_uu matches lambda.
  const double lam = m.lambda(t);
  const double sigma = fr.H(1, 1) / fr.G(1, 1) * lam >= 0.0 ? 1.0 : -1.0;
  Vector xi = fr.xi;
  for (double& x : xi) x *= sigma;

  double a = 0, b = 0, c = 0, d = 0;  // psi = a E1 + b xi, phi = c E1 + d xi
  if (m.subcase() == Subcase::S22a) {
    const double al = m.alpha(t);
    a = b = al;
    c = -1.0 / al;
    d = 1.0 / al;
  } else {
    const double th = m.theta(t);
    switch (m.subcase()) {
      case Subcase::S21:
        a = std::cos(th), b = std::sin(th), c = -std::sin(th), d = std::cos(th);
        break;
      case Subcase::S22b:
        a = std::cosh(th), b = std::sinh(th), c = -std::sinh(th), d = std::cosh(th);
        break;
      default:
        a = std::sinh(th), b = std::cosh(th), c = std::cosh(th), d = std::sinh(th);
        break;
    }
  }
  Vector psi(dim), phi(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    psi[k] = a * E1[k] + b * xi[k];
    phi[k] = c * E1[k] + d * xi[k];
  }
  return {psi, phi};
}

}  // namespace

PsiPhi psi_phi_fields(const ShapeModel& m, const ImmersionSpec& rebuilt, std::span<const double> p, double h) {
  PsiPhi out;
  std::tie(out.psi, out.phi) = psi_phi_at(m, rebuilt, p);
  out.psi_length = inner(out.psi, out.psi, rebuilt.sig());
  out.phi_length = inner(out.phi, out.phi, rebuilt.sig());
  const double psi_scale = std::max(1.0, max_abs(out.psi));
  const double phi_scale = std::max(1.0, max_abs(out.phi));
  for (std::size_t i = 0; i < p.size(); ++i) {
    Vector a(p.begin(), p.end()), b(p.begin(), p.end());
    a[i] += h;
    b[i] -= h;
    const auto [pa, fa] = psi_phi_at(m, rebuilt, a);
    const auto [pb, fb] = psi_phi_at(m, rebuilt, b);
    double dp = 0.0, df = 0.0;
    for (std::size_t k = 0; k < pa.size(); ++k) {
      dp = std::max(dp, std::fabs(pa[k] - pb[k]) / (2 * h));
      df = std::max(df, std::fabs(fa[k] - fb[k]) / (2 * h));
    }
    if (i == 0) {
      out.dpsi_t = dp / psi_scale;
      out.dphi_t = df / phi_scale;
    } else {
      out.dpsi_u = std::max(out.dpsi_u, dp / psi_scale);
    }
  }
  return out;
}

bool VerificationReport::verdict() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const NamedResidual& r) { return r.pass(); });
}

const NamedResidual* VerificationReport::find(const std::string& name) const {
  for (const auto& r : residuals)
    if (r.name == name) return &r;
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["branch"] = to_string(branch);
  if (K) j["K"] = *K;
  if (subcase) j["subcase"] = to_string(*subcase);
  if (eps_tilde != 0) j["eps_tilde"] = eps_tilde;
  j["n"] = n;
  if (sig) j["signature"] = {sig->ambient_dim(), sig->index()};
  j["samples"] = samples;
  j["seed"] = seed;
  if (psi_length) j["psi_length"] = *psi_length;
  if (phi_length) j["phi_length"] = *phi_length;
  nlohmann::json res = nlohmann::json::object();
  for (const auto& r : residuals) {
    nlohmann::json e{{"tol", r.tol}, {"pass", r.pass()}};
    if (std::isfinite(r.value)) e["value"] = r.value;
    else e["value"] = "inf";
    res[r.name] = e;
  }
  j["residuals"] = res;
  j["verdict"] = verdict() ? "pass" : "fail";
  return j;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauge-normalized comparison of the rebuilt metric with dt^2 + f^2 g_c:
// f(t)/f(t0) against the fitted warp, and c / f(t0)^2 against the fiber
// curvature (from the fit, or from the orbit when the fiber is 1-dimensional).
double metric_residual(const WarpedSpec& original, const Reconstruction& rb, double margin) {
  const WarpedFit fit = warped_fit(rb.immersion, 64, 1e-7, margin);
  double r = fit.residual;
  const double f0 = warp_values(original.f, fit.t0)[0];
  for (std::size_t i = 0; i < fit.t.size(); ++i) {
    const double want = warp_values(original.f, fit.t[i])[0] / f0;
    r = std::max(r, std::fabs(fit.f[i] - want) / std::max(1.0, std::fabs(want)));
  }
  double c_obs = 0.0;
  if (fit.c) {
    c_obs = *fit.c;
  } else {
    const RotationalSpec& w = rb.witness;
    const double radius = (w.axis == AxisType::Timelike ? w.f1 : w.f2)->value(fit.t0);
    const double kappa = w.orbit == OrbitForm::UnitSphere ? 1.0 : (w.orbit == OrbitForm::UnitHyperbolic ? -1.0 : 0.0);
    c_obs = kappa / (radius * radius);
  }
  const double c_want = original.c / (f0 * f0);
  return std::max(r, std::fabs(c_obs - c_want) / std::max(1.0, std::fabs(c_want)));
}

struct PointCheck {
  double spectrum = kInf;
  double psi = kInf;
  double psi_length = kInf;
  double normal_sign = kInf;
  double psi_len_value = 0.0;
  double phi_len_value = 0.0;
};

PointCheck check_point(const WarpedSpec& original, const Reconstruction& rb, const Vector& p) {
  PointCheck pc;
  const ShapeModel& m = *rb.shape;
  try {
    const FrameData fr = frame_data(rb.immersion, p);
    pc.normal_sign = fr.eps_tilde == m.eps_tilde() ? 0.0 : 1.0;
    const LambdaMu lm = solve_lambda_mu(original.f, original.c, p[0]);
    const int n = rb.immersion.chart_dim();
    std::vector<double> want(static_cast<std::size_t>(n), lm.lambda);
    want[0] = lm.mu;
    double imag = 0.0;
    std::vector<double> got;
    for (const auto& z : fr.spectrum.raw) {
      got.push_back(z.real());
      imag = std::max(imag, std::fabs(z.imag()));
    }
    std::sort(got.begin(), got.end());
    const double scale = std::max({1.0, std::fabs(lm.lambda), std::fabs(lm.mu)});
    pc.spectrum = kInf;
    for (double s : {1.0, -1.0}) {
      std::vector<double> w = want;
      for (double& x : w) x *= s;
      std::sort(w.begin(), w.end());
      double e = imag;
      for (std::size_t i = 0; i < w.size() && i < got.size(); ++i) e = std::max(e, std::fabs(got[i] - w[i]));
      if (got.size() != w.size()) e = kInf;
      pc.spectrum = std::min(pc.spectrum, e / scale);
    }
  } catch (const Error&) {
    pc.spectrum = kInf;
  }
  try {
    const PsiPhi pp = psi_phi_fields(m, rb.immersion, p);
    const auto [lp, lf] = expected_lengths(m.subcase());
    pc.psi = std::max({pp.dpsi_t, pp.dpsi_u, pp.dphi_t});
    pc.psi_length = std::max(std::fabs(pp.psi_length - lp), std::fabs(pp.phi_length - lf));
    pc.psi_len_value = pp.psi_length;
    pc.phi_len_value = pp.phi_length;
  } catch (const Error&) {
    pc.psi = pc.psi_length = kInf;
  }
  return pc;
}

}  // namespace

VerificationReport verify_reconstruction(const WarpedSpec& original, const Reconstruction& rb,
                                         const PipelineOptions& opts) {
  const Tolerances& tol = opts.tol;
  const ShapeModel& m = *rb.shape;
  VerificationReport rep;
  rep.branch = Branch::Rotational;
  rep.subcase = m.subcase();
  rep.eps_tilde = m.eps_tilde();
  rep.n = rb.immersion.chart_dim();
  rep.sig = rb.immersion.sig();
  rep.samples = opts.samples;
  rep.seed = opts.seed;
  auto add = [&](const char* name, double v, double t) { rep.residuals.push_back({name, v, t}); };

  ShapeChecks sc;
  try {
    sc = shape_checks(m, opts.grid);
  } catch (const Error&) {
    sc = {kInf, kInf, kInf};
  }
  add("relscurta", sc.relscurta, tol.relscurta);
  add("theta", sc.theta, tol.theta);
  add("primitive", sc.primitive, tol.primitive);

  double metric = kInf;
  try {
    metric = metric_residual(original, rb, opts.margin);
  } catch (const Error&) {
  }
  add("metric", metric, tol.metric);

  const auto pts = sample_points(rb.immersion.domain(), opts.samples, opts.seed, opts.margin);
  const auto checks = parallel_map<PointCheck>(
      pts.size(), [&](std::size_t i) { return check_point(original, rb, pts[i]); }, opts.threads);
  PointCheck worst{0, 0, 0, 0, 0, 0};
  for (const auto& c : checks) {
    worst.spectrum = std::max(worst.spectrum, c.spectrum);
    worst.psi = std::max(worst.psi, c.psi);
    worst.psi_length = std::max(worst.psi_length, c.psi_length);
    worst.normal_sign = std::max(worst.normal_sign, c.normal_sign);
  }
  if (!checks.empty()) {
    rep.psi_length = checks.front().psi_len_value;
    rep.phi_length = checks.front().phi_len_value;
  }
  add("spectrum", worst.spectrum, tol.spectrum);
  add("psi", worst.psi, tol.psi);
  add("psi_length", worst.psi_length, tol.psi_length);
  add("normal_sign", worst.normal_sign, 0.0);

  IdentityResiduals id{kInf, kInf, kInf};
  try {
    id = verify_identities(rb.immersion, opts.samples, opts.seed, opts.margin, opts.threads).max;
  } catch (const Error&) {
  }
  add("gauss", id.gauss, tol.identity);
  add("codazzi", id.codazzi, tol.identity);
  add("tsinghua", id.tsinghua, tol.identity);
  return rep;
}

VerificationReport run_pipeline(const WarpedSpec& spec, std::optional<Signature> sig, const PipelineOptions& opts) {
  const int n = spec.fiber_dim + 1;
  const BranchResult br = classify_branch(spec.f, spec.c, spec.interval, opts.grid, opts.tol);
  if (br.branch == Branch::ConstantCurvature) {
    const Case1Result c1 = case1_curvature(spec.f, spec.c, spec.interval, opts.grid, opts.tol);
    VerificationReport rep;
    rep.branch = Branch::ConstantCurvature;
    rep.K = c1.K;
    rep.n = n;
    rep.samples = opts.grid;
    rep.seed = opts.seed;
    rep.residuals.push_back({"case1_spread", c1.spread, opts.tol.case1 * std::max(1.0, std::fabs(c1.K))});
    rep.residuals.push_back({"case1_identity", c1.identity_residual, opts.tol.case1_identity});
    return rep;
  }
  const Signature S = sig.value_or(default_signature(*br.subcase, n, spec.fiber_index));
  const Reconstruction rb = reconstruct_immersion(spec.f, spec.c, spec.interval, n, S, opts);
  return verify_reconstruction(spec, rb, opts);
}

}  // namespace warphyp
