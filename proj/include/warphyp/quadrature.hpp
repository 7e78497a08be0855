#pragma once

#include <functional>
#include <vector>

namespace warphyp {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  /// Maximum number of leaf intervals (2^20).
  long max_intervals = 1L << 20;
};

/// Adaptive Simpson with Richardson correction. Throws QuadratureFailure when
/// the subdivision cap is hit or the integrand returns a non-finite value.
double adaptive_simpson(const std::function<double(double)>& g, double a, double b,
                        const QuadratureOptions& opts = {});

/// Antiderivative of g anchored at `anchor` (P(anchor) = 0), with cumulative
/// integrals cached on a uniform node grid so that each query integrates only
/// from the nearest node.
class CumulativeIntegral {
 public:
  CumulativeIntegral() = default;
  CumulativeIntegral(std::function<double(double)> g, double anchor, double t_max, int nodes,
                     QuadratureOptions opts = {});

  double operator()(double t) const;
  double anchor() const noexcept { return anchor_; }

 private:
  std::function<double(double)> g_;
  double anchor_ = 0.0;
  double step_ = 0.0;
  std::vector<double> node_values_;
  QuadratureOptions opts_;
};

}  // namespace warphyp
