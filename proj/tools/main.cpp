#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "warphyp/cli.hpp"
#include "warphyp/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"warphyp: warped-product hypersurface checks"};
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> tols;
  std::string mesh;
  app.add_option("--config", config, "JSON job file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides config 'out')");
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
  app.add_option("--mesh", mesh, "mesh grid ROWSxCOLS");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    warphyp::JobConfig job = warphyp::load_config(config);
    if (!out.empty()) job.out_dir = out;
    if (seed) job.options.seed = *seed;
    for (const auto& t : tols) warphyp::apply_tolerance_override(job.options, t);
    if (!mesh.empty()) {
      if (job.mode == warphyp::Mode::Classify || job.mode == warphyp::Mode::Sweep) {
        throw warphyp::Error(warphyp::ErrorKind::ConfigError, "cli", "mesh", "--mesh is not used by this mode");
      }
      const auto drop = job.mesh ? job.mesh->drop : std::nullopt;
      job.mesh = warphyp::parse_mesh_grid(mesh);
      job.mesh->drop = drop;
    }
    const auto result = warphyp::run_job(job);
    warphyp::write_outputs(job.out_dir, result);
    const auto& rep = result.report;
    std::cout << warphyp::to_string(job.mode) << ": ";
    if (rep.contains("error")) {
      const auto& e = rep["error"];
      std::cout << "error " << e["kind"].get<std::string>() << " in " << e["module"].get<std::string>()
                << "::" << e["op"].get<std::string>() << ": " << e["detail"].get<std::string>();
    } else if (rep.contains("verdict")) {
      std::cout << rep["verdict"].get<std::string>();
    } else {
      std::cout << "done";
    }
    std::cout << " -> " << job.out_dir.string() << "\n";
    return result.exit_code;
  } catch (const warphyp::Error& e) {
    std::cerr << "error " << warphyp::to_string(e.kind()) << " in " << e.module() << "::" << e.op() << ": "
              << e.detail() << "\n";
    return e.kind() == warphyp::ErrorKind::ConfigError ? 2 : 3;
  }
}
