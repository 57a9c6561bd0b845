#pragma once
// Experiment orchestration: scenario construction, train/eval phases, KPI
// computation, threshold and load sweeps, steering traces, CSV emission.

#include <filesystem>
#include <string>
#include <vector>

#include "ratsteer/agents.hpp"
#include "ratsteer/baselines.hpp"
#include "ratsteer/world.hpp"

namespace ratsteer {

struct Scenario {
  WorldConfig world;
  AgentConfig agent;
  std::string agent_name = "hrl";  // hrl | dqn | heuristic
  double dqn_threshold = 0.8;
  HeuristicWeights heuristic;
  int train_episodes = 2;
  long periods_per_episode = 5000;
  long eval_periods = 2000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::vector<double> loads_mbps = {5.0, 10.0};
  std::vector<double> sweep_thresholds = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  int sweep_seeds = 3;
  int jobs = 0;  // 0 = all hardware threads
  std::string out_dir = "out";

  long total_train_periods() const { return train_episodes * periods_per_episode; }
};

struct KpiReport {
  std::string agent;
  double load_mbps = 0.0;
  std::uint64_t seed = 0;
  double throughput_mbps = 0.0;
  double delay_ms = 0.0;  // mean over delivered packets
  double delay_p95_ms = 0.0;
  double drop_rate = 0.0;
  double objective = 0.0;
  // per traffic type
  std::array<double, kNumTrafficTypes> throughput_by_type_mbps{};
  std::array<double, kNumTrafficTypes> delay_by_type_ms{};
  std::array<double, kNumTrafficTypes> drop_by_type{};
  int flows_meeting_bitrate = 0;
  int flows_with_spare_capacity = 0;
  int flows_meeting_latency = 0;
  int flow_count = 0;
  long generated_pkts = 0;
  long delivered_pkts = 0;
  long dropped_pkts = 0;
};

std::unique_ptr<Agent> make_agent(const Scenario& sc, const std::string& name,
                                  std::uint64_t seed);

// Train (for learning agents) then evaluate greedily on a fresh world seed;
// KPIs cover the evaluation phase only.
KpiReport run_one(const Scenario& sc, const std::string& agent, double load_mbps,
                  std::uint64_t seed);

struct RunKey {
  std::string agent;
  double load_mbps;
  std::uint64_t seed;
};

// Parallel over independent (agent, load, seed) runs; result order matches
// the key order regardless of scheduling.
std::vector<KpiReport> run_grid(const Scenario& sc, const std::vector<RunKey>& keys);

struct SweepRow {
  double threshold = 0.0;
  double load_mbps = 0.0;
  double throughput_mbps = 0.0;
  double delay_ms = 0.0;
  double drop_rate = 0.0;
};

// DQN baseline at each (threshold, load) pair, averaged over sweep_seeds.
std::vector<SweepRow> threshold_sweep(const Scenario& sc);

// Per-period steering trace of the evaluation phase (first window periods).
std::vector<TraceRow> steering_trace(const Scenario& sc, long window_periods);

struct Summary {
  std::string agent;
  double load_mbps = 0.0;
  double throughput_mean = 0.0, throughput_sd = 0.0;
  double delay_mean = 0.0, delay_sd = 0.0;
  double drop_mean = 0.0, drop_sd = 0.0;
};
std::vector<Summary> summarize(const std::vector<KpiReport>& reports);

// CSV writers; floats with 6 significant digits, fixed column order.
void write_kpi_csv(const std::filesystem::path& file, const std::vector<KpiReport>& rows);
void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows);
void write_trace_csv(const std::filesystem::path& file, const std::vector<TraceRow>& rows);
void write_summary_csv(const std::filesystem::path& file, const std::vector<Summary>& rows);

std::string format_g6(double v);

}  // namespace ratsteer
