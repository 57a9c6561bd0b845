// ratsteer command-line front end: scenario config parsing, experiment
// subcommands, CSV output management.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ratsteer/config.hpp"
#include "ratsteer/harness.hpp"

using namespace ratsteer;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string agent;
  std::string out_dir;
  long seed = -1;
  int episodes = -1;
  int jobs = -1;
};

Scenario load_scenario(const CommonOpts& o) {
  Scenario sc = o.config_path.empty() ? default_scenario() : parse_config(o.config_path);
  if (!o.agent.empty()) sc.agent_name = o.agent;
  if (o.seed >= 0) sc.seeds = {static_cast<std::uint64_t>(o.seed)};
  if (o.episodes >= 0) sc.train_episodes = o.episodes;
  if (o.jobs >= 0) sc.jobs = o.jobs;
  if (!o.out_dir.empty()) sc.out_dir = o.out_dir;
  if (const char* env = std::getenv("RAT_STEER_OUT")) sc.out_dir = env;
  return sc;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_agent = true) {
  cmd->add_option("--config", o.config_path, "scenario config file (JSON)");
  if (with_agent)
    cmd->add_option("--agent", o.agent, "agent: hrl, dqn or heuristic")
        ->check(CLI::IsMember({"hrl", "dqn", "heuristic"}));
  cmd->add_option("--seed", o.seed, "single seed overriding the configured seed list");
  cmd->add_option("--out-dir", o.out_dir, "output directory (env RAT_STEER_OUT overrides)");
  cmd->add_option("--episodes", o.episodes, "training episodes");
  cmd->add_option("--jobs", o.jobs, "parallel runs (0 = all cores)");
}

int cmd_run(const CommonOpts& o) {
  const Scenario sc = load_scenario(o);
  std::vector<RunKey> keys;
  for (auto seed : sc.seeds) keys.push_back({sc.agent_name, sc.world.per_ue_load_mbps, seed});
  const auto reports = run_grid(sc, keys);
  const auto dir = std::filesystem::path(sc.out_dir);
  write_kpi_csv(dir / "kpi.csv", reports);
  write_summary_csv(dir / "kpi_summary.csv", summarize(reports));
  for (const auto& r : reports) {
    std::cout << r.agent << " load=" << format_g6(r.load_mbps) << " seed=" << r.seed
              << "  throughput=" << format_g6(r.throughput_mbps) << " Mbps"
              << "  delay=" << format_g6(r.delay_ms) << " ms"
              << "  drop=" << format_g6(r.drop_rate)
              << "  objective=" << format_g6(r.objective) << '\n';
  }
  std::cout << "wrote " << (dir / "kpi.csv").string() << '\n';
  return 0;
}

int cmd_sweep_threshold(const CommonOpts& o) {
  const Scenario sc = load_scenario(o);
  const auto rows = threshold_sweep(sc);
  const auto dir = std::filesystem::path(sc.out_dir);
  write_sweep_csv(dir / "sweep.csv", rows);
  for (const auto& r : rows)
    std::cout << "th=" << format_g6(r.threshold) << " load=" << format_g6(r.load_mbps)
              << "  throughput=" << format_g6(r.throughput_mbps) << " Mbps\n";
  std::cout << "wrote " << (dir / "sweep.csv").string() << '\n';
  return 0;
}

int cmd_sweep_load(const CommonOpts& o) {
  const Scenario sc = load_scenario(o);
  const std::vector<std::string> agents =
      o.agent.empty() ? std::vector<std::string>{"hrl", "dqn", "heuristic"}
                      : std::vector<std::string>{o.agent};
  std::vector<RunKey> keys;
  for (const auto& a : agents)
    for (double load : sc.loads_mbps)
      for (auto seed : sc.seeds) keys.push_back({a, load, seed});
  const auto reports = run_grid(sc, keys);
  const auto dir = std::filesystem::path(sc.out_dir);
  write_kpi_csv(dir / "kpi.csv", reports);
  write_summary_csv(dir / "kpi_summary.csv", summarize(reports));
  for (const auto& s : summarize(reports))
    std::cout << s.agent << " load=" << format_g6(s.load_mbps)
              << "  throughput=" << format_g6(s.throughput_mean) << "±"
              << format_g6(s.throughput_sd)
              << "  delay=" << format_g6(s.delay_mean) << "±" << format_g6(s.delay_sd)
              << "  drop=" << format_g6(s.drop_mean) << '\n';
  std::cout << "wrote " << (dir / "kpi.csv").string() << '\n';
  return 0;
}

int cmd_trace(const CommonOpts& o, long window) {
  const Scenario sc = load_scenario(o);
  const auto rows = steering_trace(sc, window);
  const auto dir = std::filesystem::path(sc.out_dir);
  write_trace_csv(dir / "trace.csv", rows);
  long events = 0;
  for (const auto& r : rows) events += r.switched;
  std::cout << rows.size() << " trace rows, " << events << " steer-away events\n";
  std::cout << "wrote " << (dir / "trace.csv").string() << '\n';
  return 0;
}

#define CHECK(cond)                                              \
  do {                                                           \
    const bool ok = (cond);                                      \
    std::cout << (ok ? "  ok   " : "  FAIL ") << #cond << '\n';  \
    if (!ok) failures++;                                         \
  } while (0)

int cmd_selfcheck(const CommonOpts& o) {
  Scenario sc = load_scenario(o);
  int failures = 0;

  std::cout << "reward identities\n";
  const RewardWeights w{0.5, 0.5, 0.25};
  CHECK(intrinsic_reward(1.0, 1.0, false, w) == 1.0);
  CHECK(intrinsic_reward(0.5, 2.0, true, w) == 1.0);
  const std::vector<double> hist{0, 1, 2, 3};
  CHECK(extrinsic_reward(hist) == 1.5);
  CHECK(delay_param(200.0, qos_profile(TrafficType::Voice)) == 0.5);
  CHECK(throughput_param(5.0, qos_profile(TrafficType::Video)) == 0.5);

  std::cout << "simulation invariants (1000 ticks, heavy load)\n";
  {
    WorldConfig wc = sc.world;
    wc.per_ue_load_mbps = 10.0;
    World world(wc, 42);
    bool conserved = true, occupancy_ok = true;
    for (int t = 0; t < 1000; ++t) {
      world.step();
      conserved = conserved && world.conservation_holds();
      for (const auto& b : world.base_stations()) {
        const double occ = world.queue_occupancy(b.id);
        occupancy_ok = occupancy_ok && occ >= 0.0 && occ <= 1.0;
      }
    }
    CHECK(conserved);
    CHECK(occupancy_ok);
    CHECK(world.kpi().generated() > 0);
  }

  std::cout << "determinism (two heuristic evaluations)\n";
  {
    Scenario mini = sc;
    mini.agent_name = "heuristic";
    mini.eval_periods = 200;
    const KpiReport a = run_one(mini, "heuristic", 10.0, 7);
    const KpiReport b = run_one(mini, "heuristic", 10.0, 7);
    CHECK(a.throughput_mbps == b.throughput_mbps);
    CHECK(a.delay_ms == b.delay_ms);
    CHECK(a.drop_rate == b.drop_rate);
  }

  std::cout << (failures == 0 ? "selfcheck passed\n" : "selfcheck FAILED\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-RAT traffic steering simulator"};
  app.require_subcommand(1);

  CommonOpts run_o, sweepth_o, sweepload_o, trace_o, check_o;
  long trace_window = 200;

  auto* run_cmd = app.add_subcommand("run", "train and evaluate one agent, write kpi.csv");
  add_common(run_cmd, run_o);
  auto* sweepth_cmd =
      app.add_subcommand("sweep-threshold", "DQN threshold x load sweep, write sweep.csv");
  add_common(sweepth_cmd, sweepth_o, /*with_agent=*/false);
  auto* sweepload_cmd =
      app.add_subcommand("sweep-load", "per-agent KPI curves over loads, write kpi.csv");
  add_common(sweepload_cmd, sweepload_o);
  auto* trace_cmd = app.add_subcommand("trace", "per-period steering trace, write trace.csv");
  add_common(trace_cmd, trace_o);
  trace_cmd->add_option("--window", trace_window, "evaluation periods to trace");
  auto* check_cmd = app.add_subcommand("selfcheck", "run the built-in invariant suite");
  add_common(check_cmd, check_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_o);
    if (sweepth_cmd->parsed()) return cmd_sweep_threshold(sweepth_o);
    if (sweepload_cmd->parsed()) return cmd_sweep_load(sweepload_o);
    if (trace_cmd->parsed()) return cmd_trace(trace_o, trace_window);
    if (check_cmd->parsed()) return cmd_selfcheck(check_o);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
