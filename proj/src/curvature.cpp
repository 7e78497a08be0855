#include "warphyp/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "warphyp/error.hpp"

namespace warphyp {

double Tensor3::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::fabs(x));
  return m;
}

double Tensor4::max_abs() const noexcept {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::fabs(x));
  return m;
}

Vector MetricCurvature::apply(std::span<const double> x, std::span<const double> y, std::span<const double> z) const {
  const int n = up.dim();
  Vector out(static_cast<std::size_t>(n), 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out[l] += up(l, i, j, k) * x[i] * y[j] * z[k];
  return out;
}

double MetricCurvature::sectional(std::span<const double> x, std::span<const double> y) const {
  const int n = lowered.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "sectional_curvature", "vector length mismatch");
  }
  auto g = [&](std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += metric(i, j) * a[i] * b[j];
    return s;
  };
  const double xx = g(x, x), yy = g(y, y), xy = g(x, y);
  const double den = xx * yy - xy * xy;
  if (std::fabs(den) <= 1e-12 * (std::fabs(xx * yy) + xy * xy)) {
    throw Error(ErrorKind::DegeneratePlane, "hypersurface", "sectional_curvature", "plane is degenerate");
  }
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += lowered(i, j, k, l) * x[i] * y[j] * y[k] * x[l];
  return num / den;
}

MetricCurvature curvature_from_metric(std::span<const Jet> metric, int n) {
  if (static_cast<int>(metric.size()) != n * n) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "curvature_from_metric", "need n*n metric jets");
  }
  const int order = metric[0].order();
  if (order < 1 || metric[0].nvars() != n) {
    throw Error(ErrorKind::OrderUnsupported, "hypersurface", "curvature_from_metric", "metric jets need order >= 1");
  }
  MetricCurvature mc;
  mc.metric = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mc.metric(i, j) = metric[i * n + j].value();
  try {
    mc.inverse_metric = inverse(mc.metric);
  } catch (const Error&) {
    throw Error(ErrorKind::DegenerateMetric, "hypersurface", "curvature_from_metric", "metric is singular");
  }
  const Matrix& gi = mc.inverse_metric;

  auto dg = [&](int m, int i, int j) { return metric[i * n + j].partial({m}); };
  auto ddg = [&](int m, int p, int i, int j) { return metric[i * n + j].partial({m, p}); };

  // Gamma_{k,ij} with the lowered index first.
  Tensor3 low(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) low(k, i, j) = 0.5 * (dg(i, j, k) + dg(j, i, k) - dg(k, i, j));

  mc.gamma = Tensor3(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += gi(l, k) * low(k, i, j);
        mc.gamma(l, i, j) = s;
      }
  if (order < 2) return mc;

  // d_m Gamma^l_ij = d_m(G^-1)^{lk} Gamma_{k,ij} + (G^-1)^{lk} d_m Gamma_{k,ij},
  // with d_m G^-1 = -G^-1 (d_m G) G^-1.
  Tensor4 dgamma(n);  // (m, l, i, j)
  for (int m = 0; m < n; ++m) {
    Matrix dG(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dG(i, j) = dg(m, i, j);
    const Matrix dGi = -1.0 * (gi * dG * gi);
    Tensor3 dlow(n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) dlow(k, i, j) = 0.5 * (ddg(m, i, j, k) + ddg(m, j, i, k) - ddg(m, k, i, j));
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += dGi(l, k) * low(k, i, j) + gi(l, k) * dlow(k, i, j);
          dgamma(m, l, i, j) = s;
        }
  }

  mc.term_scale = dgamma.max_abs() + n * mc.gamma.max_abs() * mc.gamma.max_abs();
  mc.up = Tensor4(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = dgamma(i, l, j, k) - dgamma(j, l, i, k);
          for (int m = 0; m < n; ++m) s += mc.gamma(l, i, m) * mc.gamma(m, j, k) - mc.gamma(l, j, m) * mc.gamma(m, i, k);
          mc.up(l, i, j, k) = s;
        }
  mc.lowered = Tensor4(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += mc.metric(l, m) * mc.up(m, i, j, k);
          mc.lowered(i, j, k, l) = s;
        }
  return mc;
}

}  // namespace warphyp
