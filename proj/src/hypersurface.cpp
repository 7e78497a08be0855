#include "warphyp/hypersurface.hpp"

#include <algorithm>
#include <cmath>

#include "warphyp/error.hpp"
#include "warphyp/parallel.hpp"

namespace warphyp {
namespace {

constexpr double kDegeneracyTol = 1e-12;
constexpr double kScaleFloor = 1e-12;

double relative(double diff, double scale) { return diff / std::max(scale, kScaleFloor); }

struct Built {
  LocalGeometry geo;
  std::vector<Jet> metric;  // n*n, order - 1
};

// order 1: G and xi. order 2: + H, S, Christoffel. order 3: + curvature, dH.
Built build(const ImmersionSpec& F, std::span<const double> p, int order) {
  const int n = F.chart_dim();
  const Signature& sig = F.sig();
  const auto jets = F.jets(p, order);
  Built b;
  FrameData& fr = b.geo.frame;
  fr.point.assign(p.begin(), p.end());

  std::vector<std::vector<Jet>> tan(n);
  for (int i = 0; i < n; ++i)
    for (const auto& c : jets) tan[i].push_back(c.differentiate(i));

  b.metric.reserve(static_cast<std::size_t>(n) * n);
  fr.G = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      b.metric.push_back(inner_generic<Jet>(tan[i], tan[j], sig));
      fr.G(i, j) = b.metric.back().value();
    }
  double hadamard = 1.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += fr.G(i, j) * fr.G(i, j);
    hadamard *= std::sqrt(row);
  }
  if (!(std::fabs(determinant(fr.G)) > kDegeneracyTol * hadamard)) {
    throw Error(ErrorKind::DegenerateMetric, "hypersurface", "induced_metric", "induced metric is degenerate");
  }
  for (int i = 0; i < n; ++i) {
    Vector t;
    for (const auto& c : tan[i]) t.push_back(c.value());
    b.geo.tangents.push_back(std::move(t));
  }

  // The normal needs one order less than the tangents carry.
  std::vector<std::vector<Jet>> tan_low(n);
  for (int i = 0; i < n; ++i)
    for (const auto& c : tan[i]) tan_low[i].push_back(order >= 2 ? c.truncate(order - 2) : c);
  const auto N = normal_cofactor_generic<Jet>(tan_low, sig);
  const Jet nn = inner_generic<Jet>(N, N, sig);
  double euclid = 0.0;
  for (const auto& c : N) euclid += c.value() * c.value();
  if (!(std::fabs(nn.value()) > kDegeneracyTol * euclid)) {
    throw Error(ErrorKind::NullNormal, "hypersurface", "unit_normal", "normal vector is null");
  }
  fr.eps_tilde = nn.value() > 0 ? 1 : -1;
  const Jet len = sqrt(nn * static_cast<double>(fr.eps_tilde));
  std::vector<Jet> xi;
  for (const auto& c : N) {
    xi.push_back(c / len);
    fr.xi.push_back(xi.back().value());
  }
  if (order < 2) return b;

  std::vector<Jet> Hj;
  fr.H = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Jet> second;
      for (const auto& c : tan[i]) second.push_back(c.differentiate(j));
      Hj.push_back(inner_generic<Jet>(second, xi, sig));
      fr.H(i, j) = Hj.back().value();
    }
  try {
    fr.S = inverse(fr.G) * fr.H;
  } catch (const Error&) {
    throw Error(ErrorKind::SingularMatrix, "hypersurface", "shape_operator", "metric not invertible");
  }
  fr.spectrum = eig_spectrum(fr.S);
  b.geo.curvature = curvature_from_metric(b.metric, n);
  if (order < 3) return b;

  b.geo.dH = Tensor3(n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b.geo.dH(m, i, j) = Hj[i * n + j].partial({m});
  return b;
}

}  // namespace

LocalGeometry local_geometry(const ImmersionSpec& F, std::span<const double> p) { return build(F, p, 3).geo; }

Matrix induced_metric(const ImmersionSpec& F, std::span<const double> p) { return build(F, p, 1).geo.frame.G; }

std::vector<Jet> induced_metric_jets(const ImmersionSpec& F, std::span<const double> p, int order) {
  const int n = F.chart_dim();
  const auto jets = F.jets(p, order + 1);
  std::vector<std::vector<Jet>> tan(n);
  for (int i = 0; i < n; ++i)
    for (const auto& c : jets) tan[i].push_back(c.differentiate(i));
  std::vector<Jet> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.push_back(inner_generic<Jet>(tan[i], tan[j], F.sig()));
  return out;
}

std::pair<Vector, int> unit_normal(const ImmersionSpec& F, std::span<const double> p) {
  auto b = build(F, p, 1);
  return {b.geo.frame.xi, b.geo.frame.eps_tilde};
}

Matrix second_fundamental_form(const ImmersionSpec& F, std::span<const double> p) {
  return build(F, p, 2).geo.frame.H;
}

Matrix shape_operator(const ImmersionSpec& F, std::span<const double> p) { return build(F, p, 2).geo.frame.S; }

FrameData frame_data(const ImmersionSpec& F, std::span<const double> p) { return build(F, p, 2).geo.frame; }

Tensor3 christoffel(const ImmersionSpec& F, std::span<const double> p) {
  return build(F, p, 2).geo.curvature.gamma;
}

MetricCurvature riemann_intrinsic(const ImmersionSpec& F, std::span<const double> p) {
  return build(F, p, 3).geo.curvature;
}

double sectional_curvature(const ImmersionSpec& F, std::span<const double> p, std::span<const double> x,
                           std::span<const double> y) {
  return riemann_intrinsic(F, p).sectional(x, y);
}

double gauss_residual(const LocalGeometry& g) {
  const Matrix& H = g.frame.H;
  const Tensor4& R = g.curvature.lowered;
  const int n = R.dim();
  const double eps = g.frame.eps_tilde;
  double diff = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double rhs = eps * (H(j, k) * H(i, l) - H(i, k) * H(j, l));
          diff = std::max(diff, std::fabs(R(i, j, k, l) - rhs));
        }
  const double hmax = H.max_abs();
  const double terms = g.curvature.term_scale * g.frame.G.max_abs();
  return relative(diff, std::max({R.max_abs(), hmax * hmax, terms}));
}

double codazzi_residual(const LocalGeometry& g) {
  const Matrix& H = g.frame.H;
  const Tensor3& gam = g.curvature.gamma;
  const int n = gam.dim();
  // (nabla H)_{ijk} = d_i H_jk - Gamma^m_ij H_mk - Gamma^m_ik H_jm.
  auto nab = [&](int i, int j, int k) {
    double s = g.dH(i, j, k);
    for (int m = 0; m < n; ++m) s -= gam(m, i, j) * H(m, k) + gam(m, i, k) * H(j, m);
    return s;
  };
  double diff = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) diff = std::max(diff, std::fabs(nab(i, j, k) - nab(j, i, k)));
  return relative(diff, std::max(g.dH.max_abs(), n * gam.max_abs() * H.max_abs()));
}

double tsinghua_residual(const LocalGeometry& g) {
  const Matrix& H = g.frame.H;
  const Tensor4& R = g.curvature.up;
  const int n = R.dim();
  // H(A, R(B,C)D) with basis vectors.
  auto term = [&](int a, int b, int c, int d) {
    double s = 0.0;
    for (int l = 0; l < n; ++l) s += H(a, l) * R(l, b, c, d);
    return s;
  };
  double diff = 0.0;
  for (int w = 0; w < n; ++w)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
          const double cyc = term(y, w, x, z) + term(w, x, y, z) + term(x, y, w, z);
          diff = std::max(diff, std::fabs(g.frame.eps_tilde * cyc));
        }
  return relative(diff, n * H.max_abs() * std::max(R.max_abs(), g.curvature.term_scale));
}

IdentityResiduals identity_residuals(const LocalGeometry& g) {
  return {gauss_residual(g), codazzi_residual(g), tsinghua_residual(g)};
}

double gauss_residual(const ImmersionSpec& F, std::span<const double> p) {
  return gauss_residual(local_geometry(F, p));
}

double codazzi_residual(const ImmersionSpec& F, std::span<const double> p) {
  return codazzi_residual(local_geometry(F, p));
}

double tsinghua_residual(const ImmersionSpec& F, std::span<const double> p) {
  return tsinghua_residual(local_geometry(F, p));
}

IdentityBatch verify_identities(const ImmersionSpec& F, int count, std::uint64_t seed, double margin,
                                unsigned threads) {
  IdentityBatch batch;
  batch.points = sample_points(F.domain(), count, seed, margin);
  batch.residuals = parallel_map<IdentityResiduals>(
      batch.points.size(), [&](std::size_t i) { return identity_residuals(local_geometry(F, batch.points[i])); },
      threads);
  for (const auto& r : batch.residuals) {
    batch.max.gauss = std::max(batch.max.gauss, r.gauss);
    batch.max.codazzi = std::max(batch.max.codazzi, r.codazzi);
    batch.max.tsinghua = std::max(batch.max.tsinghua, r.tsinghua);
  }
  return batch;
}

}  // namespace warphyp
