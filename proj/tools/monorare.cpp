// monorare -- bound and estimate P(g(X) <= 0) for monotone black boxes.
//
// Subcommands:
//   run        one sequential estimation; writes estimate.json + trajectory.csv
//   compare    replication study of MRM vs plain MC over several budgets
//   bootstrap  classifier-based bias correction of a completed run
//   volume     debug surface for the exact/MC orthant-union volumes
//
// Exit codes: 0 success, 2 config error, 3 runtime failure.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "monorare/errors.hpp"
#include "monorare/io.hpp"

using nlohmann::json;

namespace {

monorare::RunConfig load_config(const std::string& path, int jobs) {
  json j;
  try {
    j = json::parse(monorare::read_text_file(path));
  } catch (const json::exception& e) {
    throw monorare::ConfigError(std::string("cannot parse config: ") + e.what());
  }
  monorare::RunConfig cfg = monorare::parse_config(j);
  if (jobs > 0) cfg.jobs = jobs;
  return cfg;
}

int fail(int code, const std::string& type, const std::string& message) {
  std::cout << json{{"error", {{"type", type}, {"message", message}}}}.dump(2)
            << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monotone rare-event estimation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, trajectory_dir, vertices_path;
  int jobs = 0;
  int dimension = 0;
  long mc_samples = 1'000'000;
  std::uint64_t vol_seed = 20090531;

  auto* run = app.add_subcommand("run", "single MRM estimation");
  run->add_option("--config", config_path, "config JSON path")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--jobs", jobs, "worker threads");

  auto* compare = app.add_subcommand("compare", "MRM vs MC replication study");
  compare->add_option("--config", config_path, "config JSON path")->required();
  compare->add_option("--out", out_dir, "output directory");
  compare->add_option("--jobs", jobs, "worker threads");

  auto* bootstrap = app.add_subcommand("bootstrap", "bootstrap bias correction");
  bootstrap->add_option("--config", config_path, "config JSON path")->required();
  bootstrap->add_option("--out", out_dir, "output directory");
  bootstrap->add_option("--trajectory", trajectory_dir,
                        "directory holding a saved trajectory.csv + run_meta.json");
  bootstrap->add_option("--jobs", jobs, "worker threads");

  auto* volume = app.add_subcommand("volume", "orthant-union volume debug");
  volume->add_option("--vertices", vertices_path,
                     "JSON file with a list of points")->required();
  volume->add_option("--dim", dimension, "dimension (default: from data)");
  volume->add_option("--mc-samples", mc_samples, "MC sample count");
  volume->add_option("--seed", vol_seed, "MC seed");

  CLI11_PARSE(app, argc, argv);

  try {
    json result;
    if (run->parsed()) {
      result = monorare::cmd_run(load_config(config_path, jobs), out_dir);
    } else if (compare->parsed()) {
      result = monorare::cmd_compare(load_config(config_path, jobs), out_dir);
    } else if (bootstrap->parsed()) {
      result = monorare::cmd_bootstrap(load_config(config_path, jobs), out_dir,
                                       trajectory_dir);
    } else if (volume->parsed()) {
      json verts;
      try {
        verts = json::parse(monorare::read_text_file(vertices_path));
      } catch (const json::exception& e) {
        throw monorare::ConfigError(std::string("cannot parse vertices: ") +
                                    e.what());
      }
      result = monorare::cmd_volume(verts, dimension, mc_samples, vol_seed);
    }
    std::cout << result.dump(2) << std::endl;
    return 0;
  } catch (const monorare::ConfigError& e) {
    return fail(2, "config", e.what());
  } catch (const std::exception& e) {
    return fail(3, "runtime", e.what());
  }
}
