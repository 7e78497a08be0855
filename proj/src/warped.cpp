#include "warphyp/warped.hpp"

#include <algorithm>
#include <cmath>

#include "warphyp/curvature.hpp"
#include "warphyp/error.hpp"
#include "warphyp/hypersurface.hpp"

namespace warphyp {
namespace {

constexpr const char* kModule = "warped";

void check_fiber(const WarpedSpec& spec, const Matrix& fiber_g, const char* op) {
  if (static_cast<int>(fiber_g.rows()) != spec.fiber_dim || fiber_g.cols() != fiber_g.rows()) {
    throw Error(ErrorKind::DimensionMismatch, kModule, op, "fiber metric has wrong size");
  }
}

void check_vector(const WarpedSpec& spec, const TaggedVector& v, const char* op) {
  if (static_cast<int>(v.vertical.size()) != spec.fiber_dim) {
    throw Error(ErrorKind::DimensionMismatch, kModule, op, "vertical part has wrong size");
  }
}

double fiber_inner(const Matrix& g, std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) s += g(i, j) * a[i] * b[j];
  return s;
}

void axpy(double s, std::span<const double> x, Vector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

}  // namespace

std::array<double, 3> warp_derivatives(const WarpedSpec& spec, double t) {
  if (spec.f.arity() != 1) throw Error(ErrorKind::InvalidSpec, kModule, "warp", "f must depend on t only");
  const double slack = 1e-12 * std::max(1.0, spec.interval.width());
  if (t < spec.interval.lo - slack || t > spec.interval.hi + slack) {
    throw Error(ErrorKind::OutOfDomain, kModule, "warp", "t = " + std::to_string(t) + " outside the interval");
  }
  const double pt[1] = {t};
  const Jet j = eval_jet(spec.f, pt, 2);
  return {j.value(), j.partial({0}), j.partial({0, 0})};
}

Matrix warped_metric(const WarpedSpec& spec, double t, const Matrix& fiber_g) {
  check_fiber(spec, fiber_g, "warped_metric");
  const double f = warp_derivatives(spec, t)[0];
  const int k = spec.fiber_dim;
  Matrix g(k + 1, k + 1);
  g(0, 0) = 1.0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g(i + 1, j + 1) = f * f * fiber_g(i, j);
  return g;
}

double warped_inner(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                    const TaggedVector& b) {
  check_fiber(spec, fiber_g, "warped_inner");
  const double f = warp_derivatives(spec, t)[0];
  return a.horizontal * b.horizontal + f * f * fiber_inner(fiber_g, a.vertical, b.vertical);
}

Vector fiber_space_form(double c, std::span<const double> u, std::span<const double> v, std::span<const double> w,
                        const Matrix& fiber_g) {
  if (u.size() != v.size() || v.size() != w.size() || fiber_g.rows() != u.size()) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "fiber_space_form", "vector sizes differ");
  }
  Vector out(u.size(), 0.0);
  axpy(c * fiber_inner(fiber_g, v, w), u, out);
  axpy(-c * fiber_inner(fiber_g, u, w), v, out);
  return out;
}

TaggedVector warped_curvature(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                              const TaggedVector& b, const TaggedVector& c) {
  check_fiber(spec, fiber_g, "warped_curvature");
  for (const auto* v : {&a, &b, &c}) check_vector(spec, *v, "warped_curvature");
  const auto [f, f1, f2] = warp_derivatives(spec, t);
  const auto& V = a.vertical;
  const auto& W = b.vertical;
  const auto& U = c.vertical;
  TaggedVector out{0.0, Vector(V.size(), 0.0)};
  // a R(E1, W) C:  R(E1,W)E1 = (f''/f) W,  R(E1,W)U = -f f'' g(W,U) E1.
  axpy(a.horizontal * c.horizontal * f2 / f, W, out.vertical);
  out.horizontal -= a.horizontal * f * f2 * fiber_inner(fiber_g, W, U);
  // b R(V, E1) C:  R(V,E1)E1 = -(f''/f) V,  R(V,E1)U = f f'' g(V,U) E1.
  axpy(-b.horizontal * c.horizontal * f2 / f, V, out.vertical);
  out.horizontal += b.horizontal * f * f2 * fiber_inner(fiber_g, V, U);
  // R(V, W) C:  R(V,W)E1 = 0,  R(V,W)U = R_F(V,W)U - f'^2 (g(W,U) V - g(V,U) W).
  const Vector rf = fiber_space_form(spec.c, V, W, U, fiber_g);
  axpy(1.0, rf, out.vertical);
  const Vector flat = fiber_space_form(f1 * f1, V, W, U, fiber_g);
  axpy(-1.0, flat, out.vertical);
  return out;
}

TaggedVector warped_connection(const WarpedSpec& spec, double t, const Matrix& fiber_g, const TaggedVector& a,
                               const TaggedVector& b) {
  check_fiber(spec, fiber_g, "warped_connection");
  check_vector(spec, a, "warped_connection");
  check_vector(spec, b, "warped_connection");
  const auto [f, f1, f2] = warp_derivatives(spec, t);
  (void)f2;
  TaggedVector out{0.0, Vector(a.vertical.size(), 0.0)};
  // nabla_E1 E1 = 0; nabla_E1 W = nabla_W E1 = (f'/f) W.
  axpy(a.horizontal * f1 / f, b.vertical, out.vertical);
  axpy(b.horizontal * f1 / f, a.vertical, out.vertical);
  out.horizontal = -f * f1 * fiber_inner(fiber_g, a.vertical, b.vertical);
  return out;
}

WarpedSectional warped_sectional(const WarpedSpec& spec, double t) {
  const auto [f, f1, f2] = warp_derivatives(spec, t);
  return {-f2 / f, (spec.c - f1 * f1) / (f * f)};
}

std::vector<Jet> space_form_metric(double c, int fiber_index, std::span<const Jet> u) {
  const int k = static_cast<int>(u.size());
  if (k == 0) return {};
  const Signature sig(k, fiber_index);
  Jet q(u[0].layout(), 0.0);
  for (int i = 0; i < k; ++i) q += u[i] * u[i] * static_cast<double>(sig.eps(i));
  const Jet s = 1.0 + (0.25 * c) * q;
  const Jet conf = reciprocal(s * s);
  std::vector<Jet> g;
  g.reserve(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) g.push_back(i == j ? conf * static_cast<double>(sig.eps(i)) : Jet(u[0].layout(), 0.0));
  return g;
}

std::vector<Jet> warped_chart_metric(const WarpedSpec& spec, std::span<const double> point, int order) {
  const int k = spec.fiber_dim;
  if (static_cast<int>(point.size()) != k + 1) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "warped_chart_metric", "point must be (t, u_1..u_k)");
  }
  warp_derivatives(spec, point[0]);
  const auto& L = JetLayout::get(k + 1, order);
  const Jet t = Jet::variable(L, 0, point[0]);
  const Jet f = eval_jet(spec.f, std::span<const Jet>(&t, 1));
  std::vector<Jet> u;
  for (int i = 0; i < k; ++i) u.push_back(Jet::variable(L, i + 1, point[i + 1]));
  const auto gf = space_form_metric(spec.c, spec.fiber_index, u);
  const Jet f2 = f * f;
  std::vector<Jet> g;
  g.reserve(static_cast<std::size_t>(k + 1) * (k + 1));
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      if (i == 0 || j == 0)
        g.emplace_back(L, i == j ? 1.0 : 0.0);
      else
        g.push_back(f2 * gf[(i - 1) * k + (j - 1)]);
    }
  return g;
}

WarpedFit warped_fit(const ImmersionSpec& F, int samples, double tol, double margin) {
  const int n = F.chart_dim();
  if (n < 2) throw Error(ErrorKind::InvalidSpec, kModule, "warped_fit", "need a chart (t, u_1, ...)");
  const int k = n - 1;
  const auto& box = F.domain();
  WarpedFit fit;
  fit.t0 = box[0].lo + margin;

  auto fiber_block = [&](const Matrix& G) {
    Matrix b(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) b(i, j) = G(i + 1, j + 1);
    return b;
  };
  auto frob = [](const Matrix& m) {
    double s = 0.0;
    for (double x : m.data()) s += x * x;
    return std::sqrt(s);
  };
  auto dot = [](const Matrix& a, const Matrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
  };
  Vector uref(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) uref[i] = 0.5 * (box[i + 1].lo + box[i + 1].hi);
  auto at = [&](double t, std::span<const double> u) {
    Vector p{t};
    p.insert(p.end(), u.begin(), u.end());
    return induced_metric(F, p);
  };
  const Matrix ref0 = fiber_block(at(fit.t0, uref));
  // Squared warping factor from the reference fiber point.
  auto f_squared = [&](double t) { return dot(fiber_block(at(t, uref)), ref0) / dot(ref0, ref0); };

  double residual = 0.0;
  for (const auto& p : sample_points(box, samples, 0, margin)) {
    const Matrix G = induced_metric(F, p);
    const double scale = std::max(1.0, G.max_abs());
    residual = std::max(residual, std::fabs(G(0, 0) - 1.0));
    for (int i = 1; i < n; ++i) residual = std::max(residual, std::fabs(G(0, i)) / scale);
    const std::span<const double> u(p.data() + 1, static_cast<std::size_t>(k));
    const double f2 = f_squared(p[0]);
    if (!(f2 > 0)) {
      residual = std::max(residual, 1.0);
      continue;
    }
    const Matrix gf = fiber_block(G);
    const Matrix model = f2 * fiber_block(at(fit.t0, u));
    residual = std::max(residual, frob(gf - model) / std::max(frob(gf), 1e-300));
  }
  fit.residual = residual;
  fit.warped = residual <= tol;

  const int grid = 32;
  const double t1 = box[0].hi - margin;
  for (int i = 0; i <= grid; ++i) {
    const double t = fit.t0 + (t1 - fit.t0) * i / grid;
    const double f2 = f_squared(t);
    fit.t.push_back(t);
    fit.f.push_back(f2 > 0 ? std::sqrt(f2) : 0.0);
  }

  if (k >= 2) {
    Vector p{fit.t0};
    p.insert(p.end(), uref.begin(), uref.end());
    const auto mj = induced_metric_jets(F, p, 2);
    std::vector<int> keep;
    for (int i = 1; i < n; ++i) keep.push_back(i);
    std::vector<Jet> fiber;
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) fiber.push_back(mj[i * n + j].restrict_to(keep));
    const auto mc = curvature_from_metric(fiber, k);
    Vector e1(k, 0.0), e2(k, 0.0);
    e1[0] = 1.0;
    e2[1] = 1.0;
    fit.c = mc.sectional(e1, e2);
  }
  return fit;
}

}  // namespace warphyp
