#include "warphyp/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "warphyp/error.hpp"

namespace warphyp {
namespace {

constexpr const char* kModule = "scalarjet";

// Layout orders one above the evaluation cap are allowed so that primitives of
// order-3 jets can still be represented.
constexpr int kMaxLayoutOrder = kMaxJetOrder + 1;

[[noreturn]] void domain_error(const char* fn, double x) {
  throw Error(ErrorKind::DomainError, kModule, "eval_jet", std::string(fn) + " undefined at " + std::to_string(x));
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

void enumerate(int nvars, int degree, int var, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (var == nvars - 1) {
    cur[var] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int d = degree; d >= 0; --d) {
    cur[var] = static_cast<std::uint8_t>(d);
    enumerate(nvars, degree - d, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

JetLayout::JetLayout(int nvars, int order) : nvars_(nvars), order_(order) {
  for (int deg = 0; deg <= order; ++deg) {
    MultiIndex cur{};
    std::vector<MultiIndex> level;
    if (nvars == 0) {
      if (deg == 0) level.push_back(cur);
    } else {
      enumerate(nvars, deg, 0, cur, level);
    }
    for (const auto& m : level) {
      monomials_.push_back(m);
      degrees_.push_back(deg);
    }
  }
  std::size_t table = 1;
  for (int i = 0; i < nvars; ++i) table *= static_cast<std::size_t>(order + 1);
  code_to_index_.assign(table, -1);
  for (std::size_t i = 0; i < monomials_.size(); ++i) code_to_index_[code(monomials_[i])] = static_cast<int>(i);

  for (std::size_t a = 0; a < monomials_.size(); ++a) {
    for (std::size_t b = 0; b < monomials_.size(); ++b) {
      if (degrees_[a] + degrees_[b] > order) continue;
      MultiIndex s{};
      for (int v = 0; v < nvars; ++v) s[v] = static_cast<std::uint8_t>(monomials_[a][v] + monomials_[b][v]);
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(code_to_index_[code(s)])});
    }
  }
}

int JetLayout::code(const MultiIndex& alpha) const {
  int c = 0;
  int base = 1;
  for (int v = 0; v < nvars_; ++v) {
    c += alpha[v] * base;
    base *= order_ + 1;
  }
  return c;
}

int JetLayout::index_of(const MultiIndex& alpha) const {
  int deg = 0;
  for (int v = 0; v < nvars_; ++v) deg += alpha[v];
  for (int v = nvars_; v < kMaxJetVars; ++v)
    if (alpha[v] != 0) return -1;
  if (deg > order_) return -1;
  return code_to_index_[code(alpha)];
}

const JetLayout& JetLayout::get(int nvars, int order) {
  if (order < 0 || order > kMaxLayoutOrder) {
    throw Error(ErrorKind::OrderUnsupported, kModule, "jet", "order " + std::to_string(order) + " not supported");
  }
  if (nvars < 0 || nvars > kMaxJetVars) {
    throw Error(ErrorKind::DimensionMismatch, kModule, "jet", "too many jet variables");
  }
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot.reset(new JetLayout(nvars, order));
  return *slot;
}

Jet::Jet(const JetLayout& layout, double value) : layout_(&layout), coef_(layout.size(), 0.0) { coef_[0] = value; }

Jet Jet::variable(const JetLayout& layout, int var, double value) {
  Jet j(layout, value);
  if (layout.order() >= 1) {
    MultiIndex e{};
    e[var] = 1;
    j.coef_[layout.index_of(e)] = 1.0;
  }
  return j;
}

double Jet::coefficient(const MultiIndex& alpha) const {
  const int i = layout_->index_of(alpha);
  return i < 0 ? 0.0 : coef_[i];
}

double Jet::derivative(const MultiIndex& alpha) const {
  double f = 1.0;
  for (int v = 0; v < kMaxJetVars; ++v) f *= factorial(alpha[v]);
  return f * coefficient(alpha);
}

double Jet::partial(std::initializer_list<int> vars) const {
  MultiIndex alpha{};
  for (int v : vars) ++alpha[v];
  if (static_cast<int>(vars.size()) > order()) {
    throw Error(ErrorKind::OrderUnsupported, kModule, "partial", "derivative order exceeds jet order");
  }
  return derivative(alpha);
}

Jet Jet::differentiate(int var) const {
  if (order() == 0) throw Error(ErrorKind::OrderUnsupported, kModule, "differentiate", "order-0 jet");
  const JetLayout& lower = JetLayout::get(nvars(), order() - 1);
  Jet out(lower, 0.0);
  for (std::size_t i = 0; i < lower.size(); ++i) {
    MultiIndex up = lower.monomial(i);
    ++up[var];
    out.coef_[i] = static_cast<double>(up[var]) * coef_[layout_->index_of(up)];
  }
  return out;
}

Jet Jet::truncate(int new_order) const {
  if (new_order >= order()) return *this;
  const JetLayout& lower = JetLayout::get(nvars(), new_order);
  Jet out(lower, 0.0);
  for (std::size_t i = 0; i < lower.size(); ++i) out.coef_[i] = coef_[layout_->index_of(lower.monomial(i))];
  return out;
}

Jet Jet::restrict_to(std::span<const int> keep) const {
  const JetLayout& small = JetLayout::get(static_cast<int>(keep.size()), order());
  Jet out(small, 0.0);
  for (std::size_t i = 0; i < small.size(); ++i) {
    MultiIndex full{};
    for (std::size_t k = 0; k < keep.size(); ++k) full[keep[k]] = small.monomial(i)[k];
    out.coef_[i] = coef_[layout_->index_of(full)];
  }
  return out;
}

void Jet::check_compatible(const Jet& b, const char* op) const {
  if (layout_ != b.layout_) {
    throw Error(ErrorKind::DimensionMismatch, kModule, op, "jets with different variable sets or orders");
  }
}

Jet& Jet::operator+=(const Jet& b) {
  check_compatible(b, "add");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += b.coef_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& b) {
  check_compatible(b, "sub");
  for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= b.coef_[i];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b, "mul");
  Jet out(*a.layout_, 0.0);
  out.coef_[0] = 0.0;
  for (const auto& t : a.layout_->products()) out.coef_[t.out] += a.coef_[t.a] * b.coef_[t.b];
  return out;
}

Jet& Jet::operator*=(const Jet& b) { return *this = *this * b; }

Jet operator/(const Jet& a, const Jet& b) {
  if (b.value() == 0.0) throw Error(ErrorKind::DivisionByZero, kModule, "div", "divisor value is zero");
  return a * reciprocal(b);
}

Jet& Jet::operator/=(const Jet& b) { return *this = *this / b; }

Jet& Jet::operator+=(double s) {
  coef_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  coef_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  if (s == 0.0) throw Error(ErrorKind::DivisionByZero, kModule, "div", "division by zero scalar");
  for (double& c : coef_) c /= s;
  return *this;
}

Jet operator-(double s, const Jet& a) {
  Jet out = -a;
  out.coef_[0] += s;
  return out;
}

Jet operator/(double s, const Jet& a) { return s * reciprocal(a); }

Jet operator-(Jet a) {
  for (double& c : a.coef_) c = -c;
  return a;
}

Jet compose(const Jet& a, std::span<const double> taylor) {
  const int k = a.order();
  if (static_cast<int>(taylor.size()) <= k) {
    throw Error(ErrorKind::OrderUnsupported, kModule, "compose", "not enough Taylor coefficients for jet order");
  }
  Jet delta = a;
  delta.coefficients()[0] = 0.0;
  // Horner: g0 + delta (g1 + delta (g2 + delta g3)).
  Jet acc(a.layout(), taylor[k]);
  for (int i = k - 1; i >= 0; --i) {
    acc = acc * delta;
    acc += taylor[i];
  }
  return acc;
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double t[] = {s, c, -s / 2, -c / 6, s / 24};
  return compose(a, t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const double t[] = {c, -s, -c / 2, s / 6, c / 24};
  return compose(a, t);
}

Jet tan(const Jet& a) {
  const double c = std::cos(a.value());
  if (std::fabs(c) < 1e-300) domain_error("tan", a.value());
  const double x = std::tan(a.value());
  const double d1 = 1 + x * x;
  const double d2 = 2 * x * d1;
  const double d3 = 2 * d1 * (1 + 3 * x * x);
  const double d4 = 8 * x * d1 * (2 + 3 * x * x);
  const double t[] = {x, d1, d2 / 2, d3 / 6, d4 / 24};
  return compose(a, t);
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double t[] = {s, c, s / 2, c / 6, s / 24};
  return compose(a, t);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const double t[] = {c, s, c / 2, s / 6, c / 24};
  return compose(a, t);
}

Jet tanh(const Jet& a) {
  const double x = std::tanh(a.value());
  const double d1 = 1 - x * x;
  const double d2 = -2 * x * d1;
  const double d3 = -2 * d1 * (1 - 3 * x * x);
  const double d4 = 8 * x * d1 * (2 - 3 * x * x);
  const double t[] = {x, d1, d2 / 2, d3 / 6, d4 / 24};
  return compose(a, t);
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  const double t[] = {e, e, e / 2, e / 6, e / 24};
  return compose(a, t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) domain_error("ln", x);
  const double t[] = {std::log(x), 1 / x, -1 / (2 * x * x), 1 / (3 * x * x * x), -1 / (4 * x * x * x * x)};
  return compose(a, t);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x < 0.0 || (x == 0.0 && a.order() > 0)) domain_error("sqrt", x);
  const double r = std::sqrt(x);
  if (a.order() == 0) return Jet(a.layout(), r);
  const double r3 = r * r * r;
  const double t[] = {r, 1 / (2 * r), -1 / (8 * r3), 1 / (16 * r3 * r * r), -5 / (128 * r3 * r3 * r)};
  return compose(a, t);
}

Jet atan(const Jet& a) {
  const double x = a.value();
  const double q = 1 + x * x;
  const double d1 = 1 / q;
  const double d2 = -2 * x / (q * q);
  const double d3 = (6 * x * x - 2) / (q * q * q);
  const double d4 = 24 * x * (1 - x * x) / (q * q * q * q);
  const double t[] = {std::atan(x), d1, d2 / 2, d3 / 6, d4 / 24};
  return compose(a, t);
}

Jet atanh(const Jet& a) {
  const double x = a.value();
  if (!(std::fabs(x) < 1.0)) domain_error("atanh", x);
  const double q = 1 - x * x;
  const double d1 = 1 / q;
  const double d2 = 2 * x / (q * q);
  const double d3 = (2 + 6 * x * x) / (q * q * q);
  const double d4 = 24 * x * (1 + x * x) / (q * q * q * q);
  const double t[] = {std::atanh(x), d1, d2 / 2, d3 / 6, d4 / 24};
  return compose(a, t);
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw Error(ErrorKind::DivisionByZero, kModule, "div", "reciprocal of zero");
  const double r = 1 / x;
  const double t[] = {r, -r * r, r * r * r, -r * r * r * r, r * r * r * r * r};
  return compose(a, t);
}

Jet pow(const Jet& a, int exponent) {
  if (exponent < 0) {
    if (a.value() == 0.0) domain_error("pow", 0.0);
    return reciprocal(pow(a, -exponent));
  }
  Jet result(a.layout(), 1.0);
  Jet base = a;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

Jet integrate_univariate(const Jet& a, double constant) {
  if (a.nvars() != 1) throw Error(ErrorKind::DimensionMismatch, kModule, "integrate", "univariate jets only");
  const JetLayout& up = JetLayout::get(1, a.order() + 1);
  Jet out(up, constant);
  auto c = out.coefficients();
  const auto src = a.coefficients();
  for (std::size_t k = 0; k < src.size(); ++k) c[k + 1] = src[k] / static_cast<double>(k + 1);
  return out;
}

}  // namespace warphyp
