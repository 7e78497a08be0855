#include "warphyp/immersion.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "warphyp/error.hpp"

namespace warphyp {

ImmersionSpec::ImmersionSpec(std::string name, Signature sig, std::vector<std::string> vars,
                             std::vector<Interval> domain, std::shared_ptr<const ImmersionSource> source)
    : name_(std::move(name)), sig_(sig), vars_(std::move(vars)), domain_(std::move(domain)), source_(std::move(source)) {
  if (sig_.ambient_dim() != chart_dim() + 1) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "ImmersionSpec", "ambient dimension must be n + 1");
  }
  if (domain_.size() != vars_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "ImmersionSpec", "one interval per chart variable");
  }
  for (const auto& iv : domain_) {
    if (!(iv.hi > iv.lo)) throw Error(ErrorKind::InvalidSpec, "hypersurface", "ImmersionSpec", "empty chart interval");
  }
  if (!source_) throw Error(ErrorKind::InvalidSpec, "hypersurface", "ImmersionSpec", "missing source");
}

ImmersionSpec ImmersionSpec::from_expressions(std::string name, Signature sig, std::vector<std::string> vars,
                                              const std::vector<std::string>& components,
                                              std::vector<Interval> domain) {
  if (static_cast<int>(components.size()) != sig.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "from_expressions",
                "expected " + std::to_string(sig.ambient_dim()) + " components");
  }
  std::vector<ScalarField> fields;
  fields.reserve(components.size());
  for (const auto& c : components) fields.push_back(parse(c, vars));
  auto src = std::make_shared<ExpressionSource>(std::move(fields));
  return ImmersionSpec(std::move(name), sig, std::move(vars), std::move(domain), std::move(src));
}

std::vector<Jet> ImmersionSpec::jets(std::span<const double> p, int order) const {
  if (static_cast<int>(p.size()) != chart_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "jets", "point has wrong dimension");
  }
  auto out = source_->evaluate(p, order);
  if (static_cast<int>(out.size()) != sig_.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "jets", "source returned wrong component count");
  }
  return out;
}

Vector ImmersionSpec::position(std::span<const double> p) const {
  Vector x;
  for (const auto& j : jets(p, 0)) x.push_back(j.value());
  return x;
}

nlohmann::json ImmersionSpec::describe() const {
  nlohmann::json dom = nlohmann::json::array();
  for (const auto& iv : domain_) dom.push_back({iv.lo, iv.hi});
  return {{"name", name_},
          {"signature", {sig_.ambient_dim(), sig_.index()}},
          {"variables", vars_},
          {"domain", dom},
          {"source", source_->describe()}};
}

std::vector<Jet> ExpressionSource::evaluate(std::span<const double> p, int order) const {
  const auto& layout = JetLayout::get(static_cast<int>(p.size()), order);
  std::vector<Jet> inputs;
  inputs.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) inputs.push_back(Jet::variable(layout, static_cast<int>(i), p[i]));
  std::vector<Jet> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(eval_jet(c, inputs));
  return out;
}

nlohmann::json ExpressionSource::describe() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components_) comps.push_back(c.print());
  return {{"kind", "expressions"}, {"components", comps}};
}

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void allow_only(const std::string& name, const std::map<std::string, double>& params,
                std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw Error(ErrorKind::InvalidSpec, "hypersurface", "builtin_immersion", name + ": unknown parameter " + k);
  }
}

double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Cubic graph over (u1, u2, u3) with small coefficients drawn from the seed.
std::string random_cubic(std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  const char* vars[3] = {"u1", "u2", "u3"};
  std::string out;
  auto term = [&](const std::string& mono) {
    const double c = amplitude * (2.0 * unit_uniform(rng) - 1.0);
    if (out.empty())
      out = c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    out += num(std::fabs(c)) + "*" + mono;
  };
  for (int i = 0; i < 3; ++i) term(vars[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) term(std::string(vars[i]) + "*" + vars[j]);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = j; k < 3; ++k) term(std::string(vars[i]) + "*" + vars[j] + "*" + vars[k]);
  return out;
}

}  // namespace

std::vector<std::string> builtin_immersion_names() {
  return {"plane", "polar", "graph", "sphere", "hyperbolic_plane", "cylinder", "cone", "null_case3", "perturbed_graph"};
}

ImmersionSpec builtin_immersion(const std::string& name, const std::map<std::string, double>& params) {
  const Interval angle{-2.5, 2.5};
  if (name == "plane") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 0), {"u", "v"}, {"u", "v", "0"}, {{-1, 1}, {-1, 1}});
  }
  if (name == "graph") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 1), {"u", "v"}, {"u", "v", "u*v"},
                                           {{-0.5, 0.5}, {-0.5, 0.5}});
  }
  if (name == "sphere") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 0), {"t", "u"},
                                           {"cos(t)", "sin(t)*cos(u)", "sin(t)*sin(u)"}, {{0.3, 2.8}, angle});
  }
  if (name == "hyperbolic_plane") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 1), {"r", "u"},
                                           {"sinh(r)*cos(u)", "sinh(r)*sin(u)", "cosh(r)"}, {{0.2, 1.2}, angle});
  }
  if (name == "cylinder") {
    allow_only(name, params, {"radius"});
    const double r = param(params, "radius", 2.0);
    if (!(r > 0)) throw Error(ErrorKind::InvalidSpec, "hypersurface", "builtin_immersion", "cylinder radius must be > 0");
    return ImmersionSpec::from_expressions(name, Signature(3, 0), {"t", "u"},
                                           {"t", num(r) + "*cos(u)", num(r) + "*sin(u)"}, {{-1, 1}, angle});
  }
  if (name == "polar") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 0), {"r", "u"}, {"r*cos(u)", "r*sin(u)", "0"},
                                           {{0.5, 2.0}, angle});
  }
  if (name == "cone") {
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(name, Signature(3, 0), {"t", "u"},
                                           {"sqrt(3)*t/2", "-(t/2)*cos(u)", "-(t/2)*sin(u)"}, {{0.5, 2.0}, angle});
  }
  if (name == "null_case3") {
    // f1 n1 + f2 w(v) with f1 = -e^{-t}, f2 = e^t.
    allow_only(name, params, {});
    return ImmersionSpec::from_expressions(
        name, Signature(3, 1), {"t", "v"},
        {"-exp(-t) + exp(t)*(1 - v^2/4)", "exp(t)*v", "-exp(-t) + exp(t)*(-1 - v^2/4)"}, {{-0.5, 0.5}, {-1, 1}});
  }
  if (name == "perturbed_graph") {
    allow_only(name, params, {"seed", "amplitude"});
    const auto seed = static_cast<std::uint64_t>(param(params, "seed", 7));
    const double amp = param(params, "amplitude", 0.1);
    return ImmersionSpec::from_expressions(name, Signature(4, 1), {"u1", "u2", "u3"},
                                           {"u1", "u2", "u3", random_cubic(seed, amp)},
                                           {{-0.5, 0.5}, {-0.5, 0.5}, {-0.5, 0.5}});
  }
  throw Error(ErrorKind::InvalidSpec, "hypersurface", "builtin_immersion", "unknown fixture " + name);
}

std::vector<Vector> sample_points(std::span<const Interval> box, int count, std::uint64_t seed, double margin) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  if (box.size() > std::size(kPrimes)) {
    throw Error(ErrorKind::DimensionMismatch, "hypersurface", "sample_points", "too many dimensions");
  }
  Vector shift(box.size(), 0.0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    for (auto& s : shift) s = unit_uniform(rng);
  }
  std::vector<Vector> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int k = 1; k <= count; ++k) {
    Vector p(box.size());
    for (std::size_t d = 0; d < box.size(); ++d) {
      double h = 0.0, f = 1.0;
      for (int i = k; i > 0; i /= kPrimes[d]) {
        f /= kPrimes[d];
        h += f * (i % kPrimes[d]);
      }
      h += shift[d];
      h -= std::floor(h);
      const double lo = box[d].lo + margin;
      const double hi = box[d].hi - margin;
      if (!(hi > lo)) throw Error(ErrorKind::OutOfDomain, "hypersurface", "sample_points", "margin exceeds box");
      p[d] = lo + h * (hi - lo);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace warphyp
