#include "warphyp/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "warphyp/error.hpp"

namespace warphyp {
namespace {

struct SimpsonState {
  const std::function<double(double)>& g;
  long leaves = 0;
  long max_leaves;
};

double checked(const std::function<double(double)>& g, double x) {
  const double v = g(x);
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::QuadratureFailure, "scalarjet", "adaptive_simpson",
                "integrand not finite at " + std::to_string(x));
  }
  return v;
}

double recurse(SimpsonState& st, double a, double b, double fa, double fm, double fb, double whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = checked(st.g, lm);
  const double frm = checked(st.g, rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol || depth >= 50) {
    if (depth >= 50 && std::fabs(delta) > 15.0 * tol) {
      throw Error(ErrorKind::QuadratureFailure, "scalarjet", "adaptive_simpson", "recursion depth exhausted");
    }
    ++st.leaves;
    if (st.leaves > st.max_leaves) {
      throw Error(ErrorKind::QuadratureFailure, "scalarjet", "adaptive_simpson", "subdivision cap exceeded");
    }
    return left + right + delta / 15.0;
  }
  return recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& g, double a, double b, const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  SimpsonState st{g, 0, opts.max_intervals};
  const double fa = checked(g, a);
  const double fb = checked(g, b);
  const double fm = checked(g, 0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return recurse(st, a, b, fa, fm, fb, whole, opts.abs_tol, 0);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> g, double anchor, double t_max, int nodes,
                                       QuadratureOptions opts)
    : g_(std::move(g)), anchor_(anchor), opts_(opts) {
  if (nodes < 1 || !(t_max > anchor)) {
    throw Error(ErrorKind::QuadratureFailure, "scalarjet", "CumulativeIntegral", "empty integration range");
  }
  step_ = (t_max - anchor) / nodes;
  node_values_.resize(static_cast<std::size_t>(nodes) + 1);
  node_values_[0] = 0.0;
  // Per-segment tolerance keeps the accumulated error within abs_tol.
  QuadratureOptions seg = opts_;
  seg.abs_tol = opts_.abs_tol / nodes;
  for (int i = 0; i < nodes; ++i) {
    const double a = anchor_ + i * step_;
    node_values_[i + 1] = node_values_[i] + adaptive_simpson(g_, a, a + step_, seg);
  }
  opts_ = seg;
}

double CumulativeIntegral::operator()(double t) const {
  const double pos = (t - anchor_) / step_;
  long k = std::lround(pos);
  k = std::max(0L, std::min(k, static_cast<long>(node_values_.size()) - 1));
  const double node = anchor_ + static_cast<double>(k) * step_;
  return node_values_[static_cast<std::size_t>(k)] + adaptive_simpson(g_, node, t, opts_);
}

}  // namespace warphyp
