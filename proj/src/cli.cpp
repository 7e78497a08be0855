#include "warphyp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "warphyp/error.hpp"
#include "warphyp/hypersurface.hpp"
#include "warphyp/parallel.hpp"

namespace warphyp {

namespace {

constexpr const char* kModule = "cli";
using nlohmann::json;

[[noreturn]] void config_error(const std::string& op, const std::string& detail) {
  throw Error(ErrorKind::ConfigError, kModule, op, detail);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) config_error(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) config_error(where, "unknown key '" + k + "'");
  }
}

Interval interval_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    config_error(where, "interval must be [lo, hi]");
  }
  Interval I{j[0].get<double>(), j[1].get<double>()};
  if (!(I.lo < I.hi)) config_error(where, "interval needs lo < hi");
  return I;
}

Signature signature_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    config_error(where, "signature must be [dim, index]");
  }
  return Signature(j[0].get<int>(), j[1].get<int>());
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* to_string(Mode m) noexcept {
  switch (m) {
    case Mode::Classify: return "classify";
    case Mode::Reconstruct: return "reconstruct";
    case Mode::Verify: return "verify";
    case Mode::Generate: return "generate";
    case Mode::Sweep: return "sweep";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::Classify, Mode::Reconstruct, Mode::Verify, Mode::Generate, Mode::Sweep}) {
    if (s == to_string(m)) return m;
  }
  config_error("mode", "unknown mode '" + s + "'");
}

MeshOptions parse_mesh_grid(const std::string& s) {
  MeshOptions m;
  char x = 0;
  char rest = 0;
  if (std::sscanf(s.c_str(), "%d%c%d%c", &m.rows, &x, &m.cols, &rest) != 3 || (x != 'x' && x != 'X')) {
    config_error("mesh", "expected ROWSxCOLS, got '" + s + "'");
  }
  if (m.rows < 2 || m.cols < 2) config_error("mesh", "mesh needs at least 2 rows and 2 columns");
  return m;
}

json warped_to_json(const WarpedSpec& w) {
  return {{"f", w.f.print()},
          {"c", w.c},
          {"I", {w.interval.lo, w.interval.hi}},
          {"fiber_dim", w.fiber_dim},
          {"fiber_index", w.fiber_index}};
}

WarpedSpec warped_from_json(const json& j, const std::vector<std::string>& extra_vars) {
  check_keys(j, {"f", "c", "I", "n", "fiber_dim", "fiber_index"}, "warped");
  if (!j.contains("f") || !j["f"].is_string()) config_error("warped", "'f' must be a DSL string");
  if (!j.contains("c") || !j["c"].is_number()) config_error("warped", "'c' must be a number");
  if (!j.contains("I")) config_error("warped", "'I' is required");
  WarpedSpec w;
  std::vector<std::string> vars{"t"};
  vars.insert(vars.end(), extra_vars.begin(), extra_vars.end());
  try {
    w.f = parse(j["f"].get<std::string>(), vars);
  } catch (const Error& e) {
    config_error("warped", std::string("f: ") + e.what());
  }
  w.c = j["c"].get<double>();
  w.interval = interval_from(j["I"], "warped.I");
  w.fiber_dim = 1;
  if (j.contains("n")) {
    if (!j["n"].is_number_integer()) config_error("warped", "'n' must be an integer");
    w.fiber_dim = j["n"].get<int>() - 1;
  }
  if (j.contains("fiber_dim")) {
    if (!j["fiber_dim"].is_number_integer()) config_error("warped", "'fiber_dim' must be an integer");
    const int d = j["fiber_dim"].get<int>();
    if (j.contains("n") && d != w.fiber_dim) config_error("warped", "'n' and 'fiber_dim' disagree");
    w.fiber_dim = d;
  }
  if (w.fiber_dim < 1) config_error("warped", "n must be at least 2");
  w.fiber_index = j.value("fiber_index", 0);
  if (w.fiber_index < 0 || w.fiber_index > w.fiber_dim) config_error("warped", "fiber_index out of range");
  return w;
}

ImmersionSpec immersion_from_json(const json& j) {
  try {
    if (j.contains("builtin")) {
      check_keys(j, {"builtin", "params"}, "immersion");
      std::map<std::string, double> params;
      if (j.contains("params")) {
        if (!j["params"].is_object()) config_error("immersion", "'params' must be an object");
        for (const auto& [k, v] : j["params"].items()) {
          if (!v.is_number()) config_error("immersion", "parameter '" + k + "' must be a number");
          params[k] = v.get<double>();
        }
      }
      return builtin_immersion(j["builtin"].get<std::string>(), params);
    }
    check_keys(j, {"name", "signature", "variables", "domain", "components"}, "immersion");
    for (const char* k : {"signature", "variables", "domain", "components"}) {
      if (!j.contains(k)) config_error("immersion", std::string("missing '") + k + "'");
    }
    const auto vars = j["variables"].get<std::vector<std::string>>();
    std::vector<Interval> dom;
    for (const auto& iv : j["domain"]) dom.push_back(interval_from(iv, "immersion.domain"));
    return ImmersionSpec::from_expressions(j.value("name", "user"), signature_from(j["signature"], "immersion"),
                                           vars, j["components"].get<std::vector<std::string>>(), dom);
  } catch (const json::exception& e) {
    config_error("immersion", e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error("immersion", e.what());
  }
}

RotationalSpec rotational_config_from_json(const json& j) {
  check_keys(j, {"case", "axis", "orbit", "sig", "signature", "t_range", "f1", "f2"}, "rotational");
  json norm = j;
  if (j.contains("case")) {
    if (j.contains("axis")) config_error("rotational", "give either 'case' or 'axis'");
    const int c = j["case"].is_number_integer() ? j["case"].get<int>() : 0;
    static const char* axes[] = {"spacelike", "timelike", "null"};
    if (c < 1 || c > 3) config_error("rotational", "'case' must be 1, 2 or 3");
    norm.erase("case");
    norm["axis"] = axes[c - 1];
  }
  if (j.contains("sig")) {
    if (j.contains("signature")) config_error("rotational", "give either 'sig' or 'signature'");
    norm.erase("sig");
    norm["signature"] = j["sig"];
  }
  if (!norm.contains("orbit")) norm["orbit"] = norm.value("axis", "") == "null" ? "parabolic" : "sphere";
  if (!norm.contains("t_range")) norm["t_range"] = {0.0, 1.0};
  try {
    return rotational_from_json(norm);
  } catch (const Error& e) {
    config_error("rotational", e.what());
  }
}

void apply_tolerance_override(PipelineOptions& opts, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) config_error("tol", "expected NAME=VALUE, got '" + assignment + "'");
  const std::string name = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) config_error("tol", "bad value in '" + assignment + "'");
  opts.tol.set(name, v);
}

JobConfig parse_config(const json& j) {
  check_keys(j,
             {"mode", "warped", "sig", "immersion", "rotational", "sweep", "mesh", "tolerances", "seed", "samples",
              "grid", "threads", "margin", "out"},
             "config");
  if (!j.contains("mode") || !j["mode"].is_string()) config_error("config", "'mode' is required");
  JobConfig cfg;
  cfg.mode = mode_from_string(j["mode"].get<std::string>());

  const bool wants_warped = cfg.mode == Mode::Classify || cfg.mode == Mode::Reconstruct || cfg.mode == Mode::Sweep;
  const std::pair<const char*, bool> sections[] = {
      {"warped", wants_warped},
      {"sig", cfg.mode == Mode::Reconstruct},
      {"immersion", cfg.mode == Mode::Verify},
      {"rotational", cfg.mode == Mode::Generate},
      {"sweep", cfg.mode == Mode::Sweep},
      {"mesh", cfg.mode == Mode::Reconstruct || cfg.mode == Mode::Verify || cfg.mode == Mode::Generate},
  };
  for (const auto& [key, allowed] : sections) {
    if (j.contains(key) && !allowed) config_error("config", std::string("'") + key + "' is not used by mode " + to_string(cfg.mode));
  }
  for (const char* key : {"warped", "immersion", "rotational", "sweep"}) {
    const bool needed = (std::string(key) == "warped" && wants_warped) ||
                        (std::string(key) == "immersion" && cfg.mode == Mode::Verify) ||
                        (std::string(key) == "rotational" && cfg.mode == Mode::Generate) ||
                        (std::string(key) == "sweep" && cfg.mode == Mode::Sweep);
    if (needed && !j.contains(key)) config_error("config", std::string("mode ") + to_string(cfg.mode) + " needs '" + key + "'");
  }

  auto integer = [&](const char* key, auto& dst, long long lo) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_integer() || j[key].get<long long>() < lo) {
      config_error("config", std::string("'") + key + "' must be an integer >= " + std::to_string(lo));
    }
    dst = static_cast<std::remove_reference_t<decltype(dst)>>(j[key].get<long long>());
  };
  integer("seed", cfg.options.seed, 0);
  integer("samples", cfg.options.samples, 1);
  integer("grid", cfg.options.grid, 3);
  integer("threads", cfg.options.threads, 0);
  if (j.contains("margin")) {
    if (!j["margin"].is_number() || j["margin"].get<double>() < 0 || j["margin"].get<double>() >= 0.5) {
      config_error("config", "'margin' must be in [0, 0.5)");
    }
    cfg.options.margin = j["margin"].get<double>();
  }
  if (j.contains("out")) {
    if (!j["out"].is_string()) config_error("config", "'out' must be a path string");
    cfg.out_dir = j["out"].get<std::string>();
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) config_error("config", "'tolerances' must be an object");
    for (const auto& [k, v] : j["tolerances"].items()) {
      if (!v.is_number()) config_error("tolerances", "'" + k + "' must be a number");
      cfg.options.tol.set(k, v.get<double>());
    }
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, {"param", "values", "range", "count"}, "sweep");
    SweepOptions sw;
    sw.param = s.value("param", "a");
    if (sw.param == "t" || sw.param == "pi") config_error("sweep", "'param' cannot be t or pi");
    if (s.contains("values") == s.contains("range")) config_error("sweep", "give exactly one of 'values' or 'range'");
    if (s.contains("values")) {
      if (!s["values"].is_array() || s["values"].empty()) config_error("sweep", "'values' must be a non-empty array");
      for (const auto& v : s["values"]) {
        if (!v.is_number()) config_error("sweep", "'values' must be numbers");
        sw.values.push_back(v.get<double>());
      }
    } else {
      const Interval r = interval_from(s["range"], "sweep.range");
      const int count = s.value("count", 0);
      if (count < 2) config_error("sweep", "'count' must be at least 2");
      for (int i = 0; i < count; ++i) sw.values.push_back(r.lo + r.width() * i / (count - 1));
    }
    cfg.sweep = sw;
  }
  if (j.contains("warped")) {
    const auto& w = j["warped"];
    cfg.warped = warped_from_json(w, cfg.sweep ? std::vector<std::string>{cfg.sweep->param} : std::vector<std::string>{});
    cfg.warp_source = w["f"].get<std::string>();
  }
  if (j.contains("sig")) {
    cfg.sig = signature_from(j["sig"], "sig");
    if (cfg.sig->ambient_dim() != cfg.warped->fiber_dim + 2) config_error("config", "'sig' dimension must be n + 1");
  }
  if (j.contains("immersion")) cfg.immersion = immersion_from_json(j["immersion"]);
  if (j.contains("rotational")) cfg.rotational = rotational_config_from_json(j["rotational"]);
  if (j.contains("mesh")) {
    const auto& m = j["mesh"];
    if (m.is_string()) {
      cfg.mesh = parse_mesh_grid(m.get<std::string>());
    } else {
      check_keys(m, {"rows", "cols", "drop"}, "mesh");
      cfg.mesh = parse_mesh_grid(std::to_string(m.value("rows", 0)) + "x" + std::to_string(m.value("cols", 0)));
      if (m.contains("drop")) {
        if (!m["drop"].is_number_integer()) config_error("mesh", "'drop' must be an integer");
        cfg.mesh->drop = m["drop"].get<int>();
      }
    }
  }
  return cfg;
}

JobConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("load_config", "cannot read " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    config_error("load_config", path.string() + ": " + e.what());
  }
  return parse_config(j);
}

std::string export_mesh(const ImmersionSpec& F, const MeshOptions& grid) {
  const int dim = F.sig().ambient_dim();
  if (grid.rows < 2 || grid.cols < 2) config_error("export_mesh", "mesh needs at least 2 rows and 2 columns");
  int drop = -1;
  if (dim == 4) {
    if (!grid.drop) {
      throw Error(ErrorKind::UnsupportedDimension, kModule, "export_mesh", "ambient dimension 4 needs a dropped coordinate");
    }
    drop = *grid.drop;
    if (drop < 0 || drop > 3) config_error("export_mesh", "dropped coordinate must be 0..3");
  } else if (dim != 3) {
    throw Error(ErrorKind::UnsupportedDimension, kModule, "export_mesh",
                "ambient dimension " + std::to_string(dim) + " cannot be projected to 3");
  } else if (grid.drop) {
    config_error("export_mesh", "'drop' only applies to ambient dimension 4");
  }
  if (F.chart_dim() < 2) {
    throw Error(ErrorKind::UnsupportedDimension, kModule, "export_mesh", "mesh export needs at least 2 chart variables");
  }

  const auto& dom = F.domain();
  std::string out = "# " + F.name() + " " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) + "\n";
  for (int i = 0; i < grid.rows; ++i) {
    for (int k = 0; k < grid.cols; ++k) {
      // Chart variables past the second stay at the centre of their range.
      Vector p(dom.size());
      for (std::size_t a = 2; a < dom.size(); ++a) p[a] = 0.5 * (dom[a].lo + dom[a].hi);
      p[0] = dom[0].lo + dom[0].width() * i / (grid.rows - 1);
      p[1] = dom[1].lo + dom[1].width() * k / (grid.cols - 1);
      const Vector x = F.position(p);
      out += "v";
      for (int a = 0; a < dim; ++a) {
        if (a != drop) out += " " + format_number(x[a]);
      }
      out += "\n";
    }
  }
  auto idx = [&](int i, int k) { return std::to_string(i * grid.cols + k + 1); };
  for (int i = 0; i + 1 < grid.rows; ++i) {
    for (int k = 0; k + 1 < grid.cols; ++k) {
      out += "f " + idx(i, k) + " " + idx(i + 1, k) + " " + idx(i + 1, k + 1) + "\n";
      out += "f " + idx(i, k) + " " + idx(i + 1, k + 1) + " " + idx(i, k + 1) + "\n";
    }
  }
  return out;
}

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json residual_json(const NamedResidual& r) {
  json e{{"tol", r.tol}, {"pass", r.pass()}};
  if (std::isfinite(r.value)) e["value"] = r.value;
  else e["value"] = "inf";
  return e;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

json report_header(Mode m) { return {{"schema_version", VerificationReport::schema_version}, {"mode", to_string(m)}}; }

void add_mesh(RunResult& r, const JobConfig& cfg, const ImmersionSpec& F) {
  if (cfg.mesh) r.files.emplace_back("mesh.obj", export_mesh(F, *cfg.mesh));
}

RunResult run_classify(const JobConfig& cfg) {
  const auto& w = *cfg.warped;
  const BranchResult b = classify_branch(w.f, w.c, w.interval, cfg.options.grid, cfg.options.tol);
  RunResult r;
  r.report = report_header(cfg.mode);
  r.report["branch"] = to_string(b.branch);
  if (b.K) r.report["K"] = *b.K;
  if (b.subcase) r.report["subcase"] = to_string(*b.subcase);
  if (b.eps_tilde != 0) r.report["eps_tilde"] = b.eps_tilde;
  r.report["warped"] = warped_to_json(w);
  return r;
}

std::string shape_samples(const ShapeModel& m, const RotationalSpec& witness, int grid) {
  const bool null_case = m.subcase() == Subcase::S22a;
  std::string s = csv_row({"t", "f", "lambda", "mu", null_case ? "log_alpha" : "theta", "f1", "f2"});
  for (double t : grid_points(m.interval(), grid)) {
    const double angle = null_case ? m.log_alpha_jet(t, 0).value() : m.theta(t);
    s += csv_row({format_number(t), format_number(warp_values(m.f(), t)[0]), format_number(m.lambda(t)),
                  format_number(m.mu(t)), format_number(angle), format_number(witness.f1->value(t)),
                  format_number(witness.f2->value(t))});
  }
  return s;
}

RunResult run_reconstruct(const JobConfig& cfg) {
  const auto& w = *cfg.warped;
  const BranchResult b = classify_branch(w.f, w.c, w.interval, cfg.options.grid, cfg.options.tol);
  RunResult r;
  VerificationReport rep;
  if (b.branch == Branch::ConstantCurvature) {
    rep = run_pipeline(w, cfg.sig, cfg.options);
  } else {
    const Reconstruction rb = reconstruct_immersion(w.f, w.c, w.interval, w.fiber_dim + 1, cfg.sig, cfg.options);
    rep = verify_reconstruction(w, rb, cfg.options);
    const json spec{{"warped", warped_to_json(w)},
                    {"rotational", to_json(rb.witness)},
                    {"immersion", rb.immersion.describe()}};
    r.files.emplace_back("immersion.json", dump(spec));
    r.files.emplace_back("samples.csv", shape_samples(*rb.shape, rb.witness, cfg.options.grid));
    add_mesh(r, cfg, rb.immersion);
  }
  r.report = rep.to_json();
  r.report["mode"] = to_string(cfg.mode);
  r.exit_code = rep.verdict() ? 0 : 1;
  return r;
}

RunResult run_verify(const JobConfig& cfg) {
  const ImmersionSpec& F = *cfg.immersion;
  const auto& o = cfg.options;
  const IdentityBatch batch = verify_identities(F, o.samples, o.seed, o.margin, o.threads);
  const double tol = o.tol.identity;
  const NamedResidual res[] = {
      {"gauss", batch.max.gauss, tol}, {"codazzi", batch.max.codazzi, tol}, {"tsinghua", batch.max.tsinghua, tol}};

  RunResult r;
  r.report = report_header(cfg.mode);
  r.report["immersion"] = F.describe();
  r.report["samples"] = o.samples;
  r.report["seed"] = o.seed;
  bool pass = true;
  for (const auto& x : res) {
    r.report["residuals"][x.name] = residual_json(x);
    pass = pass && x.pass();
  }
  // Informational: whether the induced metric is itself a warped product.
  try {
    const WarpedFit fit = warped_fit(F, 64, 1e-7, o.margin);
    json wf{{"warped", fit.warped}, {"residual", fit.residual}};
    if (fit.c) wf["c"] = *fit.c;
    r.report["warped_fit"] = wf;
  } catch (const Error& e) {
    r.report["warped_fit"] = {{"error", std::string(to_string(e.kind()))}};
  }
  r.report["verdict"] = pass ? "pass" : "fail";
  r.exit_code = pass ? 0 : 1;

  std::vector<std::string> head = F.variables();
  for (const char* k : {"gauss", "codazzi", "tsinghua"}) head.push_back(k);
  std::string csv = csv_row(head);
  for (std::size_t i = 0; i < batch.points.size(); ++i) {
    std::vector<std::string> row;
    for (double x : batch.points[i]) row.push_back(format_number(x));
    const auto& q = batch.residuals[i];
    for (double x : {q.gauss, q.codazzi, q.tsinghua}) row.push_back(format_number(x));
    csv += csv_row(row);
  }
  r.files.emplace_back("samples.csv", csv);
  add_mesh(r, cfg, F);
  return r;
}

RunResult run_generate(const JobConfig& cfg) {
  const RotationalSpec& spec = *cfg.rotational;
  const ImmersionSpec F = make_immersion(spec);
  const auto& o = cfg.options;
  RunResult r;
  r.report = report_header(cfg.mode);
  r.report["rotational"] = to_json(spec);
  r.report["immersion"] = F.describe();
  r.report["diagnostic"] = rotational_diagnostic(F, spec, 64, o.margin);
  r.files.emplace_back("immersion.json", dump({{"rotational", to_json(spec)}, {"immersion", F.describe()}}));

  std::vector<std::string> head = F.variables();
  for (int a = 0; a < F.sig().ambient_dim(); ++a) head.push_back("x" + std::to_string(a));
  std::string csv = csv_row(head);
  for (const auto& p : sample_points(F.domain(), o.samples, o.seed, o.margin)) {
    std::vector<std::string> row;
    for (double x : p) row.push_back(format_number(x));
    for (double x : F.position(p)) row.push_back(format_number(x));
    csv += csv_row(row);
  }
  r.files.emplace_back("samples.csv", csv);
  add_mesh(r, cfg, F);
  return r;
}

struct SweepRow {
  double value = 0.0;
  std::string status;
  std::string branch;
  std::string subcase;
  std::optional<double> theta0;
  std::vector<NamedResidual> residuals;
};

RunResult run_sweep(const JobConfig& cfg) {
  const SweepOptions& sw = *cfg.sweep;
  PipelineOptions inner = cfg.options;
  inner.threads = 1;
  const auto rows = parallel_map<SweepRow>(
      sw.values.size(),
      [&](std::size_t i) {
        SweepRow row;
        row.value = sw.values[i];
        WarpedSpec spec = *cfg.warped;
        try {
          spec.f = spec.f.bind(sw.param, row.value);
          const VerificationReport rep = run_pipeline(spec, std::nullopt, inner);
          row.status = rep.verdict() ? "pass" : "fail";
          row.branch = to_string(rep.branch);
          if (rep.subcase) {
            row.subcase = to_string(*rep.subcase);
            if (*rep.subcase != Subcase::S22a) {
              row.theta0 = ShapeModel(spec.f, spec.c, spec.interval, *rep.subcase).theta(spec.interval.lo);
            }
          }
          row.residuals = rep.residuals;
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::ConfigError) throw;
          row.status = to_string(e.kind());
        }
        return row;
      },
      cfg.options.threads);

  std::vector<std::string> names;
  for (const auto& row : rows) {
    for (const auto& res : row.residuals) {
      if (std::find(names.begin(), names.end(), res.name) == names.end()) names.push_back(res.name);
    }
  }
  std::vector<std::string> head{sw.param, "status", "branch", "subcase", "theta0"};
  head.insert(head.end(), names.begin(), names.end());
  std::string csv = csv_row(head);
  int passed = 0;
  json summary = json::array();
  for (const auto& row : rows) {
    passed += row.status == "pass";
    std::vector<std::string> cells{format_number(row.value), row.status, row.branch, row.subcase,
                                   row.theta0 ? format_number(*row.theta0) : ""};
    for (const auto& name : names) {
      const auto it = std::find_if(row.residuals.begin(), row.residuals.end(),
                                   [&](const NamedResidual& x) { return x.name == name; });
      cells.push_back(it == row.residuals.end() ? "" : format_number(it->value));
    }
    csv += csv_row(cells);
    json s{{"value", row.value}, {"status", row.status}};
    if (row.theta0) s["theta0"] = *row.theta0;
    summary.push_back(s);
  }

  RunResult r;
  const bool pass = passed == static_cast<int>(rows.size());
  r.report = report_header(cfg.mode);
  r.report["warped"] = warped_to_json(*cfg.warped);
  r.report["param"] = sw.param;
  r.report["count"] = rows.size();
  r.report["passed"] = passed;
  r.report["rows"] = summary;
  r.report["verdict"] = pass ? "pass" : "fail";
  r.exit_code = pass ? 0 : 1;
  r.files.emplace_back("samples.csv", csv);
  return r;
}

}  // namespace

RunResult run_job(const JobConfig& config) {
  RunResult r;
  try {
    switch (config.mode) {
      case Mode::Classify: r = run_classify(config); break;
      case Mode::Reconstruct: r = run_reconstruct(config); break;
      case Mode::Verify: r = run_verify(config); break;
      case Mode::Generate: r = run_generate(config); break;
      case Mode::Sweep: r = run_sweep(config); break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    r = RunResult{};
    r.exit_code = 3;
    r.report = report_header(config.mode);
    r.report["error"] = {
        {"kind", std::string(to_string(e.kind()))}, {"module", e.module()}, {"op", e.op()}, {"detail", e.detail()}};
  }
  r.files.insert(r.files.begin(), {"report.json", dump(r.report)});
  return r;
}

void write_outputs(const std::filesystem::path& dir, const RunResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) config_error("write_outputs", "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& [name, text] : result.files) {
    const fs::path tmp = dir / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << text;
      if (!out.flush()) config_error("write_outputs", "cannot write " + tmp.string());
    }
    fs::rename(tmp, dir / name, ec);
    if (ec) config_error("write_outputs", "cannot rename into " + (dir / name).string() + ": " + ec.message());
  }
}

int run(const JobConfig& config) {
  const RunResult r = run_job(config);
  write_outputs(config.out_dir, r);
  return r.exit_code;
}

}  // namespace warphyp
