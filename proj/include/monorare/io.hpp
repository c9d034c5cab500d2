#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "monorare/bootstrap.hpp"
#include "monorare/engine.hpp"
#include "monorare/estimator.hpp"
#include "monorare/minmax.hpp"
#include "monorare/problem.hpp"

namespace monorare {

/// Parsed harness configuration. The master seed is mandatory; every random
/// stream in a batch derives from it.
struct RunConfig {
  nlohmann::json problem_spec;
  EngineConfig engine;
  double estimator_tol = 1e-12;
  double ci_level = 0.95;
  BootstrapConfig bootstrap;
  int replications = 0;
  std::vector<int> budgets;
  std::vector<std::string> methods{"mrm", "mc"};
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Throws ConfigError on missing/invalid fields. The MONORARE_SEED
/// environment variable, when set, overrides the config seed.
RunConfig parse_config(const nlohmann::json& j);

MonotoneProblem make_problem(const nlohmann::json& problem_spec);

nlohmann::json estimate_to_json(const Estimate& est);
nlohmann::json bootstrap_report_to_json(const BootstrapReport& report);
nlohmann::json network_to_json(const MinMaxNetwork& net);
MinMaxNetwork network_from_json(const nlohmann::json& j);

/// CSV with header k,x_1..x_d,xi,p_minus,p_plus,calls_cum; bounds are the
/// post-step values, one row per stochastic step.
std::string trajectory_to_csv(const Trajectory& traj);

/// Sidecar metadata for replaying a saved run without calling g again.
nlohmann::json trajectory_meta_json(const Trajectory& traj,
                                    const RunConfig& config);

/// Rebuild trajectory + frontiers from trajectory.csv and run_meta.json.
struct ReplayedRun {
  Trajectory trajectory;
  FrontierPair frontiers;
  EngineConfig engine;
};
ReplayedRun replay_run(const std::string& csv_text,
                       const nlohmann::json& meta);

/// Harness entry points. Each writes its artifacts under out_dir and
/// returns the primary JSON document (also printed by the CLI).
nlohmann::json cmd_run(const RunConfig& config, const std::string& out_dir);
nlohmann::json cmd_compare(const RunConfig& config, const std::string& out_dir);
nlohmann::json cmd_bootstrap(const RunConfig& config, const std::string& out_dir,
                             const std::string& trajectory_dir = "");
nlohmann::json cmd_volume(const nlohmann::json& vertices, int dimension,
                          long mc_samples, std::uint64_t seed);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace monorare
