#pragma once

// Config-driven jobs: parse a JSON job file, run one mode, write
// report.json / samples.csv / mesh.obj (and immersion.json) into an output
// directory. Config keys are listed in README.md.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "warphyp/immersion.hpp"
#include "warphyp/pipeline.hpp"
#include "warphyp/rotational.hpp"
#include "warphyp/warped.hpp"

namespace warphyp {

enum class Mode { Classify, Reconstruct, Verify, Generate, Sweep };

const char* to_string(Mode m) noexcept;
Mode mode_from_string(const std::string& s);

struct MeshOptions {
  int rows = 0;
  int cols = 0;
  /// Ambient coordinate removed before writing when the ambient dimension is 4.
  std::optional<int> drop;
};

/// "ROWSxCOLS", both at least 2.
MeshOptions parse_mesh_grid(const std::string& s);

/// The sweep parameter is a free identifier in warped.f, bound per job.
struct SweepOptions {
  std::string param = "a";
  std::vector<double> values;
};

struct JobConfig {
  Mode mode = Mode::Classify;
  std::optional<WarpedSpec> warped;
  /// Reconstruct only; defaults to default_signature().
  std::optional<Signature> sig;
  std::optional<ImmersionSpec> immersion;
  std::optional<RotationalSpec> rotational;
  std::optional<MeshOptions> mesh;
  std::optional<SweepOptions> sweep;
  /// Raw warping source for sweeps (parsed over t and the sweep parameter).
  std::string warp_source;
  PipelineOptions options;
  std::filesystem::path out_dir = "out";
};

nlohmann::json warped_to_json(const WarpedSpec& w);
/// {"f", "c", "I", "n" | "fiber_dim", "fiber_index"}. `extra_vars` are allowed
/// as free identifiers (sweep parameters); the field keeps them.
WarpedSpec warped_from_json(const nlohmann::json& j, const std::vector<std::string>& extra_vars = {});

/// {"builtin", "params"} or {"components", "variables", "domain", "signature", "name"}.
ImmersionSpec immersion_from_json(const nlohmann::json& j);

/// Also accepts {"case": 1|2|3} in place of "axis" and "sig" for "signature".
RotationalSpec rotational_config_from_json(const nlohmann::json& j);

/// ConfigError on unknown keys, missing sections or malformed values.
JobConfig parse_config(const nlohmann::json& j);
JobConfig load_config(const std::filesystem::path& path);

/// "NAME=VALUE" into opts.tol.
void apply_tolerance_override(PipelineOptions& opts, const std::string& assignment);

/// Wavefront OBJ of the (first, second) chart variable grid, vertices
/// row-major, each quad split into two triangles. In ambient dimension 4 the
/// third chart variable is held at its centre and `drop` removes one ambient
/// coordinate. UnsupportedDimension for other dimensions or a missing drop.
std::string export_mesh(const ImmersionSpec& F, const MeshOptions& grid);

struct RunResult {
  int exit_code = 0;
  nlohmann::json report;
  /// File name -> contents, in the order written.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs a job without touching the filesystem. Numerical errors become exit
/// code 3 with an "error" report; ConfigError propagates.
RunResult run_job(const JobConfig& config);

/// Each file is written to a temporary name in `dir` and renamed.
void write_outputs(const std::filesystem::path& dir, const RunResult& result);

/// run_job followed by write_outputs into config.out_dir.
int run(const JobConfig& config);

/// Canonical %.17g formatting used by every output file.
std::string format_number(double x);

}  // namespace warphyp
