#pragma once

// Truncated multivariate Taylor expansions ("jets").
//
// A jet of order k in m variables stores the Taylor coefficients
// c_alpha = d^alpha f / alpha! for every multi-index |alpha| <= k. Arithmetic is
// truncated polynomial arithmetic, so the Leibniz rule holds exactly up to
// rounding. The layout (monomial enumeration and product table) is shared
// between all jets of the same (m, k).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace warphyp {

inline constexpr int kMaxJetVars = 8;
inline constexpr int kMaxJetOrder = 3;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

class JetLayout {
 public:
  /// Cached, thread-safe. Throws OrderUnsupported above kMaxJetOrder + 1.
  static const JetLayout& get(int nvars, int order);

  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const MultiIndex& monomial(std::size_t i) const { return monomials_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  /// Index of a multi-index, or -1 if its degree exceeds the order.
  int index_of(const MultiIndex& alpha) const;

  struct Term {
    std::uint32_t a, b, out;
  };
  std::span<const Term> products() const noexcept { return products_; }

 private:
  JetLayout(int nvars, int order);
  int code(const MultiIndex& alpha) const;

  int nvars_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::vector<int> degrees_;
  std::vector<int> code_to_index_;
  std::vector<Term> products_;
};

class Jet {
 public:
  Jet() = default;
  /// Constant jet.
  Jet(const JetLayout& layout, double value);
  /// Independent variable x_var seeded at value.
  static Jet variable(const JetLayout& layout, int var, double value);

  const JetLayout& layout() const { return *layout_; }
  int nvars() const { return layout_->nvars(); }
  int order() const { return layout_->order(); }
  bool valid() const noexcept { return layout_ != nullptr; }

  double value() const { return coef_[0]; }
  std::span<const double> coefficients() const noexcept { return coef_; }
  std::span<double> coefficients() noexcept { return coef_; }
  double coefficient(const MultiIndex& alpha) const;
  /// Partial derivative d^alpha f (= alpha! * coefficient).
  double derivative(const MultiIndex& alpha) const;
  /// Convenience partials by variable list: d(), d(i), d(i, j), d(i, j, k).
  double partial(std::initializer_list<int> vars) const;

  /// d/dx_var, one order lower.
  Jet differentiate(int var) const;
  /// Drop every term above the given order.
  Jet truncate(int order) const;
  /// Restrict to the listed variables (others frozen at the expansion point).
  Jet restrict_to(std::span<const int> keep) const;

  Jet& operator+=(const Jet& b);
  Jet& operator-=(const Jet& b);
  Jet& operator*=(const Jet& b);
  Jet& operator/=(const Jet& b);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a);
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);
  friend Jet operator-(Jet a);

 private:
  void check_compatible(const Jet& b, const char* op) const;

  const JetLayout* layout_ = nullptr;
  std::vector<double> coef_;
};

/// g(a) for a univariate g given by its Taylor coefficients at a.value():
/// taylor[k] = g^(k)(a0) / k!. Extra coefficients beyond the jet order are ignored.
Jet compose(const Jet& a, std::span<const double> taylor);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
Jet tanh(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet atan(const Jet& a);
Jet atanh(const Jet& a);
Jet reciprocal(const Jet& a);
Jet pow(const Jet& a, int exponent);

/// Univariate antiderivative with the given constant; raises the order by one.
Jet integrate_univariate(const Jet& a, double constant);

}  // namespace warphyp
