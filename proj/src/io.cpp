#include "monorare/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "monorare/errors.hpp"
#include "monorare/rng.hpp"
#include "monorare/volume.hpp"

namespace monorare {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
T field_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + key + "': " + e.what());
  }
}

}  // namespace

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  RunConfig cfg;

  if (const char* env = std::getenv("MONORARE_SEED")) {
    cfg.seed = std::strtoull(env, nullptr, 10);
  } else if (j.contains("seed")) {
    if (!j.at("seed").is_number()) throw ConfigError("'seed' must be a number");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  } else {
    throw ConfigError("missing mandatory field 'seed'");
  }

  if (!j.contains("problem")) throw ConfigError("missing 'problem' section");
  cfg.problem_spec = j.at("problem");

  const json eng = j.value("engine", json::object());
  cfg.engine.n_steps = field_or<int>(eng, "n_steps", 100);
  cfg.engine.p_guess = field_or<double>(eng, "p_guess", 0.0);  // 0 = pick later
  cfg.engine.init_steps = field_or<int>(eng, "init_steps", 0);
  cfg.engine.max_rejections = field_or<long>(eng, "max_rejections", 1'000'000);
  const json vol = eng.value("volume", json::object());
  cfg.engine.volume_policy.exact_max_dim = field_or<int>(vol, "exact_max_dim", 3);
  cfg.engine.volume_policy.mc_samples = field_or<long>(vol, "mc_samples", 1'000'000);
  if (cfg.engine.n_steps < 1) throw ConfigError("engine.n_steps must be >= 1");

  const json est = j.value("estimator", json::object());
  cfg.estimator_tol = field_or<double>(est, "tol", 1e-12);
  cfg.ci_level = field_or<double>(est, "level", 0.95);
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw ConfigError("estimator.level must lie in (0,1)");
  }

  const json boot = j.value("bootstrap", json::object());
  cfg.bootstrap.m_samples = field_or<long>(boot, "M", 100'000);
  cfg.bootstrap.q_samples = field_or<long>(boot, "Q", 1'000'000);
  cfg.bootstrap.s_replicates = field_or<int>(boot, "S", 1'000);
  cfg.bootstrap.train.groups = field_or<int>(boot, "groups", 4);
  cfg.bootstrap.train.units = field_or<int>(boot, "units", 4);
  cfg.bootstrap.train.iterations = field_or<int>(boot, "iterations", 400);
  cfg.bootstrap.train.learning_rate = field_or<double>(boot, "learning_rate", 0.01);
  cfg.bootstrap.train.momentum = field_or<double>(boot, "momentum", 0.9);
  cfg.bootstrap.train.tau_start = field_or<double>(boot, "tau_start", 0.1);
  cfg.bootstrap.train.tau_end = field_or<double>(boot, "tau_end", 0.005);
  cfg.bootstrap.train.beta_start = field_or<double>(boot, "beta_start", 2.0);
  cfg.bootstrap.train.beta_end = field_or<double>(boot, "beta_end", 200.0);
  cfg.bootstrap.max_degenerate_retries =
      field_or<int>(boot, "max_degenerate_retries", 100);

  cfg.replications = field_or<int>(j, "replications", 0);
  if (j.contains("budgets")) {
    for (const auto& b : j.at("budgets")) cfg.budgets.push_back(b.get<int>());
  }
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) {
      const std::string name = m.get<std::string>();
      if (name != "mrm" && name != "mc") {
        throw ConfigError("unknown method '" + name + "'");
      }
      cfg.methods.push_back(name);
    }
  }
  cfg.jobs = field_or<int>(j, "jobs", 1);
  return cfg;
}

namespace {

Marginal marginal_from_json(const json& m) {
  const std::string family = m.value("family", "");
  if (family == "uniform") {
    return Marginal::uniform(m.value("a", 0.0), m.value("b", 1.0));
  }
  if (family == "gamma") {
    return Marginal::gamma_integer(m.at("shape").get<int>(),
                                   m.value("scale", 1.0));
  }
  if (family == "gumbel-truncated") {
    return Marginal::gumbel_truncated(m.at("location").get<double>(),
                                      m.at("scale").get<double>(),
                                      m.at("lo").get<double>(),
                                      m.at("hi").get<double>());
  }
  if (family == "normal-truncated") {
    return Marginal::normal_truncated(
        m.at("mean").get<double>(), m.at("sd").get<double>(),
        m.at("lo").get<double>(),
        m.value("hi", std::numeric_limits<double>::infinity()));
  }
  if (family == "triangular") {
    return Marginal::triangular(m.at("min").get<double>(),
                                m.at("mode").get<double>(),
                                m.at("max").get<double>());
  }
  throw ConfigError("unknown marginal family '" + family + "'");
}

}  // namespace

MonotoneProblem make_problem(const json& spec) {
  try {
    const std::string kind = spec.value("problem", "");
    if (kind == "toy") {
      return toy_problem(spec.at("d").get<int>(), spec.at("p").get<double>());
    }
    if (kind == "hydraulic2") return hydraulic_problem(HydraulicVersion::Dim2);
    if (kind == "hydraulic4") return hydraulic_problem(HydraulicVersion::Dim4);
    if (kind == "custom") {
      std::vector<Marginal> marginals;
      for (const auto& m : spec.at("marginals")) {
        marginals.push_back(marginal_from_json(m));
      }
      std::vector<int> signs(marginals.size(), 1);
      if (spec.contains("signs")) {
        signs.clear();
        for (const auto& s : spec.at("signs")) signs.push_back(s.get<int>());
      }
      const int d = static_cast<int>(marginals.size());
      auto map = named_physical_map(spec.at("map").get<std::string>(), d);
      std::optional<double> known_p;
      if (spec.contains("known_p")) known_p = spec.at("known_p").get<double>();
      return MonotoneProblem("custom", std::move(marginals), std::move(signs),
                             std::move(map), spec.value("threshold", 0.0),
                             known_p);
    }
    throw ConfigError("problem must be toy|hydraulic2|hydraulic4|custom");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad problem spec: ") + e.what());
  }
}

json estimate_to_json(const Estimate& est) {
  return json{{"p_hat", est.p_hat},
              {"fisher_hat", est.fisher},
              {"variance", est.variance},
              {"ci_lower", est.ci_lower},
              {"ci_upper", est.ci_upper},
              {"level", est.level},
              {"bound_lower", est.final_bounds.lower},
              {"bound_upper", est.final_bounds.upper},
              {"gamma0", est.gamma0},
              {"degenerate", est.degenerate},
              {"n", est.n},
              {"calls_total", est.calls_total}};
}

json bootstrap_report_to_json(const BootstrapReport& report) {
  return json{{"surrogate_p", report.surrogate_p},
              {"bias_hat", report.bias_hat},
              {"corrected_p", report.corrected_p},
              {"M", report.m_samples},
              {"Q", report.q_samples},
              {"S", report.s_replicates},
              {"train_error", report.train_error},
              {"degenerate_retries", report.degenerate_retries},
              {"replicate_estimates", report.replicate_estimates}};
}

json network_to_json(const MinMaxNetwork& net) {
  json groups = json::array();
  for (int g = 0; g < net.groups; ++g) {
    json units = json::array();
    for (int u = 0; u < net.units; ++u) {
      json w = json::array();
      for (int d = 0; d < net.dimension; ++d) w.push_back(net.weight(g, u, d));
      units.push_back(json{{"weights", w}, {"offset", net.offset(g, u)}});
    }
    groups.push_back(units);
  }
  return json{{"dimension", net.dimension},
              {"groups", groups}};
}

MinMaxNetwork network_from_json(const json& j) {
  MinMaxNetwork net;
  net.dimension = j.at("dimension").get<int>();
  const json& groups = j.at("groups");
  net.groups = static_cast<int>(groups.size());
  net.units = net.groups > 0 ? static_cast<int>(groups.at(0).size()) : 0;
  for (const auto& units : groups) {
    if (static_cast<int>(units.size()) != net.units) {
      throw ConfigError("network json: ragged group sizes");
    }
    for (const auto& unit : units) {
      for (const auto& w : unit.at("weights")) {
        net.weights.push_back(w.get<double>());
      }
      net.offsets.push_back(unit.at("offset").get<double>());
    }
  }
  return net;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "k";
  for (int d = 1; d <= traj.dimension; ++d) out << ",x_" << d;
  out << ",xi,p_minus,p_plus,calls_cum\n";
  for (const StepRecord& r : traj.records) {
    out << r.k;
    for (double c : r.point) out << ',' << fmt_double(c);
    out << ',' << r.signature << ',' << fmt_double(r.post_lower) << ','
        << fmt_double(r.post_upper) << ',' << (traj.init_calls + r.k) << '\n';
  }
  return out.str();
}

json trajectory_meta_json(const Trajectory& traj, const RunConfig& config) {
  json init_points = json::array();
  for (const auto& [pt, sig] : traj.init_points) {
    init_points.push_back(json{{"point", pt}, {"signature", sig}});
  }
  return json{{"dimension", traj.dimension},
              {"seed", traj.seed},
              {"init_calls", traj.init_calls},
              {"init_points", init_points},
              {"problem", config.problem_spec},
              {"engine",
               {{"n_steps", config.engine.n_steps},
                {"p_guess", config.engine.p_guess},
                {"init_steps", config.engine.init_steps},
                {"max_rejections", config.engine.max_rejections},
                {"volume",
                 {{"exact_max_dim", config.engine.volume_policy.exact_max_dim},
                  {"mc_samples", config.engine.volume_policy.mc_samples}}}}}};
}

ReplayedRun replay_run(const std::string& csv_text, const json& meta) {
  const int dimension = meta.at("dimension").get<int>();
  EngineConfig engine;
  const json& eng = meta.at("engine");
  engine.n_steps = eng.at("n_steps").get<int>();
  engine.p_guess = eng.at("p_guess").get<double>();
  engine.init_steps = eng.at("init_steps").get<int>();
  engine.max_rejections = eng.at("max_rejections").get<long>();
  engine.volume_policy.exact_max_dim =
      eng.at("volume").at("exact_max_dim").get<int>();
  engine.volume_policy.mc_samples = eng.at("volume").at("mc_samples").get<long>();

  Trajectory traj;
  traj.dimension = dimension;
  traj.seed = meta.at("seed").get<std::uint64_t>();
  traj.init_calls = meta.at("init_calls").get<int>();

  FrontierPair frontiers(dimension);
  int evals = 0;
  double vol_minus = 0.0, vol_plus = 0.0;
  auto refresh = [&](int signature) {
    // Mirrors the engine's per-evaluation MC seed schedule so MC-policy
    // replays reproduce the same numbers.
    const std::uint64_t vol_seed = SplitMix64::child_seed(
        traj.seed, 0x1000 + static_cast<std::uint64_t>(evals));
    if (signature == 1) {
      vol_minus = side_volume(frontiers.failure_frontier(), OrthantSide::Lower,
                              dimension, engine.volume_policy, vol_seed);
    } else {
      vol_plus = side_volume(frontiers.safe_frontier(), OrthantSide::Upper,
                             dimension, engine.volume_policy, vol_seed);
    }
  };

  for (const auto& ip : meta.at("init_points")) {
    Point pt = ip.at("point").get<Point>();
    const int sig = ip.at("signature").get<int>();
    frontiers.insert(pt, sig);
    ++evals;
    refresh(sig);
    traj.init_points.emplace_back(std::move(pt), sig);
  }
  double prev_lower = vol_minus;
  double prev_upper = 1.0 - vol_plus;

  std::istringstream in(csv_text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trajectory csv: empty file");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    StepRecord rec;
    std::getline(row, cell, ',');
    rec.k = std::stoi(cell);
    rec.point.resize(static_cast<std::size_t>(dimension));
    for (int d = 0; d < dimension; ++d) {
      std::getline(row, cell, ',');
      rec.point[static_cast<std::size_t>(d)] = std::strtod(cell.c_str(), nullptr);
    }
    std::getline(row, cell, ',');
    rec.signature = std::stoi(cell);
    std::getline(row, cell, ',');
    rec.post_lower = std::strtod(cell.c_str(), nullptr);
    std::getline(row, cell, ',');
    rec.post_upper = std::strtod(cell.c_str(), nullptr);
    rec.pre_lower = prev_lower;
    rec.pre_upper = prev_upper;
    prev_lower = rec.post_lower;
    prev_upper = rec.post_upper;
    frontiers.insert(rec.point, rec.signature);
    ++evals;
    traj.records.push_back(std::move(rec));
  }
  return ReplayedRun{std::move(traj), std::move(frontiers), engine};
}

namespace {

// When the config omits p_guess, fall back on the problem's known p (if
// any) to size the deterministic initialization.
double effective_p_guess(const RunConfig& config, const MonotoneProblem& problem) {
  if (config.engine.p_guess > 0.0) return config.engine.p_guess;
  if (problem.known_p()) return *problem.known_p();
  return 0.01;
}

}  // namespace

json cmd_run(const RunConfig& config, const std::string& out_dir) {
  MonotoneProblem problem = make_problem(config.problem_spec);
  EngineConfig engine = config.engine;
  engine.p_guess = effective_p_guess(config, problem);

  MrmRun run(problem.evaluator(), problem.dimension(), engine, config.seed);
  Trajectory traj = run.run();
  const Estimate est =
      estimate_from_trajectory(traj, config.estimator_tol, config.ci_level);

  const json out = estimate_to_json(est);
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/estimate.json", out.dump(2) + "\n");
    write_text_file(out_dir + "/trajectory.csv", trajectory_to_csv(traj));
    RunConfig echo = config;
    echo.engine = engine;
    write_text_file(out_dir + "/run_meta.json",
                    trajectory_meta_json(traj, echo).dump(2) + "\n");
  }
  return out;
}

json cmd_compare(const RunConfig& config, const std::string& out_dir) {
  if (config.replications < 2) {
    throw ConfigError("compare needs replications >= 2");
  }
  if (config.budgets.empty()) {
    throw ConfigError("compare needs a non-empty 'budgets' list");
  }
  MonotoneProblem problem = make_problem(config.problem_spec);
  const int d = problem.dimension();
  EngineConfig base_engine = config.engine;
  base_engine.p_guess = effective_p_guess(config, problem);

  // Reference probability for gamma_n: the known value when the problem has
  // one, otherwise a dedicated 40,000-sample MC estimate.
  double p_ref;
  if (problem.known_p()) {
    p_ref = *problem.known_p();
  } else {
    p_ref = mc_baseline(problem, 40'000, SplitMix64::child_seed(config.seed, 0xFEED))
                .p_hat;
  }

  json rows = json::array();
  std::ostringstream csv;
  csv << "method,n,mean_p,cv,gamma_n,rmse,completed,failed\n";

  for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
    const std::string& method = config.methods[mi];
    for (std::size_t bi = 0; bi < config.budgets.size(); ++bi) {
      const int n = config.budgets[bi];
      std::vector<double> estimates, widths;
      int failed = 0;
      std::string first_error;
      for (int rep = 0; rep < config.replications; ++rep) {
        // Documented counter-based split: one key per (method, budget, rep).
        const std::uint64_t key =
            ((static_cast<std::uint64_t>(mi) * 4096 + bi) << 24) +
            static_cast<std::uint64_t>(rep);
        const std::uint64_t seed = SplitMix64::child_seed(config.seed, key);
        try {
          if (method == "mrm") {
            EngineConfig engine = base_engine;
            engine.n_steps = n;
            MonotoneProblem owned = problem;
            Trajectory traj =
                run_mrm(owned.evaluator(), d, engine, seed);
            const Estimate est = estimate_from_trajectory(
                traj, config.estimator_tol, config.ci_level);
            estimates.push_back(est.p_hat);
            widths.push_back(est.final_bounds.width());
          } else {
            // Plain MC, with bounds recovered from the same DOE through
            // monotonicity.
            MonotoneProblem owned = problem;
            SplitMix64 rng(seed);
            FrontierPair frontiers(d);
            Point x(static_cast<std::size_t>(d));
            long failures = 0;
            for (int i = 0; i < n; ++i) {
              for (int k = 0; k < d; ++k) {
                x[static_cast<std::size_t>(k)] = rng.next_unit();
              }
              const int sig = (owned.evaluate(x) <= 0.0) ? 1 : 0;
              failures += sig;
              frontiers.insert(x, sig);
            }
            estimates.push_back(static_cast<double>(failures) /
                                static_cast<double>(n));
            const BoundsPair b =
                bounds(frontiers, base_engine.volume_policy,
                       SplitMix64::child_seed(seed, 0xB0));
            widths.push_back(b.width());
          }
        } catch (const std::exception& e) {
          ++failed;
          if (first_error.empty()) first_error = e.what();
        }
      }

      const int completed = static_cast<int>(estimates.size());
      double mean = 0.0, cv = 0.0, gamma_n = 0.0, rmse = 0.0;
      if (completed > 0) {
        for (double v : estimates) mean += v;
        mean /= completed;
        double ss = 0.0;
        for (double v : estimates) ss += (v - mean) * (v - mean);
        const double sd =
            (completed > 1) ? std::sqrt(ss / (completed - 1)) : 0.0;
        cv = (mean > 0.0) ? sd / mean : 0.0;
        double wsum = 0.0;
        for (double w : widths) wsum += w;
        gamma_n = wsum / completed / p_ref;
        if (problem.known_p()) {
          double se = 0.0;
          for (double v : estimates) {
            se += (v - *problem.known_p()) * (v - *problem.known_p());
          }
          rmse = std::sqrt(se / completed);
        }
      }
      json row{{"method", method},     {"n", n},
               {"mean_p", mean},       {"cv", cv},
               {"gamma_n", gamma_n},   {"completed", completed},
               {"failed", failed}};
      if (problem.known_p()) row["rmse"] = rmse;
      if (failed > 0) row["first_error"] = first_error;
      rows.push_back(row);
      csv << method << ',' << n << ',' << fmt_double(mean) << ','
          << fmt_double(cv) << ',' << fmt_double(gamma_n) << ','
          << fmt_double(rmse) << ',' << completed << ',' << failed << '\n';
    }
  }

  json out{{"p_ref", p_ref},
           {"replications", config.replications},
           {"incomplete", false},
           {"rows", rows}};
  for (const auto& row : rows) {
    if (row.at("failed").get<int>() > 0) out["incomplete"] = true;
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/comparison.json", out.dump(2) + "\n");
    write_text_file(out_dir + "/comparison.csv", csv.str());
  }
  return out;
}

json cmd_bootstrap(const RunConfig& config, const std::string& out_dir,
                   const std::string& trajectory_dir) {
  if (config.bootstrap.s_replicates < 1) {
    throw ConfigError("bootstrap needs S >= 1");
  }

  Trajectory traj;
  EngineConfig engine;
  std::optional<FrontierPair> frontiers;
  if (trajectory_dir.empty()) {
    MonotoneProblem problem = make_problem(config.problem_spec);
    engine = config.engine;
    engine.p_guess = effective_p_guess(config, problem);
    MrmRun run(problem.evaluator(), problem.dimension(), engine, config.seed);
    traj = run.run();
    frontiers = run.frontiers();
  } else {
    ReplayedRun replayed =
        replay_run(read_text_file(trajectory_dir + "/trajectory.csv"),
                   json::parse(read_text_file(trajectory_dir + "/run_meta.json")));
    traj = std::move(replayed.trajectory);
    engine = replayed.engine;
    frontiers = std::move(replayed.frontiers);
  }

  const Estimate original =
      estimate_from_trajectory(traj, config.estimator_tol, config.ci_level);

  // Replicates reuse the original run's schedule exactly.
  engine.n_steps = static_cast<int>(traj.records.size());

  const std::uint64_t boot_seed = SplitMix64::child_seed(config.seed, 0xB007);
  BootstrapConfig bcfg = config.bootstrap;
  bcfg.jobs = config.jobs;
  bcfg.train.seed = SplitMix64::child_seed(boot_seed, 4);

  SplitMix64 rng_minus(SplitMix64::child_seed(boot_seed, 1));
  SplitMix64 rng_plus(SplitMix64::child_seed(boot_seed, 2));
  const std::vector<Point> fail_pts = sample_dominated(
      *frontiers, Domination::FailureDominated, bcfg.m_samples, rng_minus);
  const std::vector<Point> safe_pts = sample_dominated(
      *frontiers, Domination::SafeDominated, bcfg.m_samples, rng_plus);
  const TrainResult trained = train_minmax(fail_pts, safe_pts, bcfg.train);

  BootstrapReport report =
      bootstrap_bias(trained.net, engine, config.estimator_tol, bcfg, boot_seed,
                     original.p_hat, original.final_bounds);
  report.train_error = trained.train_error;

  json out{{"original", estimate_to_json(original)},
           {"bootstrap", bootstrap_report_to_json(report)}};
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text_file(out_dir + "/bootstrap.json", out.dump(2) + "\n");
    write_text_file(out_dir + "/network.json",
                    network_to_json(trained.net).dump(2) + "\n");
  }
  return out;
}

json cmd_volume(const json& vertices, int dimension, long mc_samples,
                std::uint64_t seed) {
  std::vector<Point> pts;
  if (!vertices.is_array()) {
    throw ConfigError("volume: vertices must be a JSON array of points");
  }
  for (const auto& v : vertices) {
    Point p;
    for (const auto& c : v) p.push_back(c.get<double>());
    if (dimension == 0) dimension = static_cast<int>(p.size());
    pts.push_back(std::move(p));
  }
  if (dimension == 0) dimension = 1;
  const double exact = klee_volume(pts, dimension);
  const VolumeEstimate mc = volume_mc(pts, OrthantSide::Lower, mc_samples, seed);
  return json{{"dimension", dimension},
              {"vertex_count", pts.size()},
              {"exact", exact},
              {"mc", mc.value},
              {"mc_std_error", mc.std_error},
              {"mc_samples", mc.sample_count},
              {"discrepancy", mc.value - exact}};
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace monorare
