#include "ratsteer/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace ratsteer {

std::unique_ptr<Agent> make_agent(const Scenario& sc, const std::string& name,
                                  std::uint64_t seed) {
  if (name == "hrl") {
    HrlAgent::Options opt;
    opt.cfg = sc.agent;
    opt.total_train_periods = sc.total_train_periods();
    opt.learned_meta = true;
    opt.label = "hrl";
    return std::make_unique<HrlAgent>(std::move(opt), seed);
  }
  if (name == "dqn") {
    DqnBaselineConfig cfg{sc.agent, sc.dqn_threshold, sc.total_train_periods()};
    return make_dqn_agent(cfg, seed);
  }
  if (name == "heuristic") {
    return std::make_unique<HeuristicAgent>(sc.agent, sc.heuristic);
  }
  throw std::invalid_argument("unknown agent: " + name);
}

KpiReport run_one(const Scenario& sc, const std::string& agent_name, double load_mbps,
                  std::uint64_t seed) {
  WorldConfig wc = sc.world;
  wc.per_ue_load_mbps = load_mbps;

  auto agent = make_agent(sc, agent_name, seed);

  if (agent->trainable()) {
    World train_world(wc, seed);
    for (int ep = 0; ep < sc.train_episodes; ++ep) {
      for (long p = 0; p < sc.periods_per_episode; ++p)
        agent->act_period(train_world, /*eval=*/false, nullptr);
      agent->end_episode(train_world);
    }
  }

  // fresh world seed for the greedy evaluation phase
  World eval_world(wc, seed * 0x9e3779b97f4a7c15ull + 0xeba1);
  agent->begin_eval();

  const int nf = static_cast<int>(eval_world.flows().size());
  std::vector<double> flow_reward_sum(nf, 0.0);
  std::vector<double> flow_bits(nf, 0.0);
  std::vector<double> flow_delay_sum(nf, 0.0);
  std::vector<long> flow_delivered(nf, 0);
  for (long p = 0; p < sc.eval_periods; ++p) {
    const PeriodLog log = agent->act_period(eval_world, /*eval=*/true);
    for (int f = 0; f < nf; ++f) {
      flow_reward_sum[f] += log.flow_rewards[f];
      const auto& w = eval_world.window(f);
      flow_bits[f] += w.delivered_bits;
      flow_delay_sum[f] += w.sum_delay_ms;
      flow_delivered[f] += w.delivered_pkts;
    }
  }
  if (!eval_world.conservation_holds())
    throw std::logic_error("run_one: packet conservation violated");

  const double eval_s =
      sc.eval_periods * sc.agent.ticks_per_decision * wc.tick_s;
  const KpiCounters& kpi = eval_world.kpi();

  KpiReport r;
  r.agent = agent_name;
  r.load_mbps = load_mbps;
  r.seed = seed;
  r.flow_count = nf;
  r.generated_pkts = kpi.generated();
  r.delivered_pkts = kpi.delivered();
  r.dropped_pkts = kpi.dropped();
  r.throughput_mbps = kpi.delivered_bits() / eval_s / 1e6;
  r.delay_ms = kpi.delivered() > 0 ? kpi.sum_delay_ms() / kpi.delivered() : 0.0;
  r.delay_p95_ms = kpi.delay_percentile_ms(0.95);
  r.drop_rate =
      kpi.generated() > 0 ? static_cast<double>(kpi.dropped()) / kpi.generated() : 0.0;
  for (int k = 0; k < kNumTrafficTypes; ++k) {
    const auto& t = kpi.by_type[k];
    r.throughput_by_type_mbps[k] = t.delivered_bits / eval_s / 1e6;
    r.delay_by_type_ms[k] = t.delivered_pkts > 0 ? t.sum_delay_ms / t.delivered_pkts : 0.0;
    r.drop_by_type[k] =
        t.generated_pkts > 0 ? static_cast<double>(t.dropped_pkts) / t.generated_pkts : 0.0;
  }

  const auto& flows = eval_world.flows();
  for (int f = 0; f < nf; ++f) {
    r.objective += flow_reward_sum[f] / static_cast<double>(sc.eval_periods);
    const double mbps = flow_bits[f] / eval_s / 1e6;
    const double req = flows[f].profile.min_throughput_mbps;
    if (mbps >= req) r.flows_meeting_bitrate++;
    if (eval_world.full_band_capacity_bps(flows[f].ue, flows[f].current_rat) >= req * 1e6)
      r.flows_with_spare_capacity++;
    if (flow_delivered[f] > 0 &&
        flow_delay_sum[f] / flow_delivered[f] <= flows[f].profile.delay_budget_ms)
      r.flows_meeting_latency++;
  }
  return r;
}

std::vector<KpiReport> run_grid(const Scenario& sc, const std::vector<RunKey>& keys) {
  std::vector<KpiReport> out(keys.size());
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned jobs =
      sc.jobs > 0 ? static_cast<unsigned>(sc.jobs) : (hw > 0 ? hw : 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= keys.size()) return;
      out[i] = run_one(sc, keys[i].agent, keys[i].load_mbps, keys[i].seed);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, keys.size()); ++j)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::vector<SweepRow> threshold_sweep(const Scenario& sc) {
  // One DQN is trained per (load, seed) at the default threshold; the trained
  // system is then evaluated at every candidate operating threshold on the
  // same evaluation world, so the sweep isolates the threshold's effect from
  // training noise.
  struct Cell {
    double load;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double load : sc.loads_mbps)
    for (int s = 0; s < sc.sweep_seeds; ++s)
      cells.push_back({load, sc.seeds.empty() ? static_cast<std::uint64_t>(s + 1)
                                              : sc.seeds[0] + s});

  // [cell][threshold] -> (throughput, delay, drop)
  std::vector<std::vector<SweepRow>> per_cell(cells.size());
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned jobs =
      sc.jobs > 0 ? static_cast<unsigned>(sc.jobs) : (hw > 0 ? hw : 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      WorldConfig wc = sc.world;
      wc.per_ue_load_mbps = cells[i].load;
      DqnBaselineConfig dcfg{sc.agent, sc.dqn_threshold, sc.total_train_periods()};
      auto agent = make_dqn_agent(dcfg, cells[i].seed);
      World train_world(wc, cells[i].seed);
      for (int ep = 0; ep < sc.train_episodes; ++ep) {
        for (long p = 0; p < sc.periods_per_episode; ++p)
          agent->act_period(train_world, /*eval=*/false, nullptr);
        agent->end_episode(train_world);
      }
      for (double th : sc.sweep_thresholds) {
        agent->set_frozen_threshold(th);
        agent->begin_eval();
        World eval_world(wc, cells[i].seed * 0x9e3779b97f4a7c15ull + 0xeba1);
        for (long p = 0; p < sc.eval_periods; ++p) agent->act_period(eval_world, true, nullptr);
        if (!eval_world.conservation_holds())
          throw std::logic_error("threshold_sweep: packet conservation violated");
        const double eval_s =
            sc.eval_periods * sc.agent.ticks_per_decision * wc.tick_s;
        const KpiCounters& kpi = eval_world.kpi();
        SweepRow row;
        row.threshold = th;
        row.load_mbps = cells[i].load;
        row.throughput_mbps = kpi.delivered_bits() / eval_s / 1e6;
        row.delay_ms = kpi.delivered() > 0 ? kpi.sum_delay_ms() / kpi.delivered() : 0.0;
        row.drop_rate = kpi.generated() > 0
                            ? static_cast<double>(kpi.dropped()) / kpi.generated()
                            : 0.0;
        per_cell[i].push_back(row);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, cells.size()); ++j)
    pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // mean over seeds, rows ordered (threshold, load) to match the CSV schema
  std::vector<SweepRow> rows;
  for (double th : sc.sweep_thresholds) {
    for (double load : sc.loads_mbps) {
      SweepRow row;
      row.threshold = th;
      row.load_mbps = load;
      int n = 0;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].load != load) continue;
        for (const auto& r : per_cell[i]) {
          if (r.threshold != th) continue;
          row.throughput_mbps += r.throughput_mbps;
          row.delay_ms += r.delay_ms;
          row.drop_rate += r.drop_rate;
          n++;
        }
      }
      row.throughput_mbps /= n;
      row.delay_ms /= n;
      row.drop_rate /= n;
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<TraceRow> steering_trace(const Scenario& sc, long window_periods) {
  const std::uint64_t seed = sc.seeds.empty() ? 1 : sc.seeds[0];
  WorldConfig wc = sc.world;
  auto agent = make_agent(sc, sc.agent_name, seed);
  if (agent->trainable()) {
    World train_world(wc, seed);
    for (int ep = 0; ep < sc.train_episodes; ++ep) {
      for (long p = 0; p < sc.periods_per_episode; ++p)
        agent->act_period(train_world, false);
      agent->end_episode(train_world);
    }
  }
  World eval_world(wc, seed * 0x9e3779b97f4a7c15ull + 0xeba1);
  agent->begin_eval();
  std::vector<TraceRow> trace;
  for (long p = 0; p < window_periods; ++p) agent->act_period(eval_world, true, &trace);
  return trace;
}

std::vector<Summary> summarize(const std::vector<KpiReport>& reports) {
  std::vector<Summary> out;
  auto find = [&](const std::string& agent, double load) -> Summary& {
    for (auto& s : out)
      if (s.agent == agent && s.load_mbps == load) return s;
    out.push_back({agent, load});
    return out.back();
  };
  // two passes: means, then sample sd
  struct Acc {
    int n = 0;
  };
  for (const auto& r : reports) {
    auto& s = find(r.agent, r.load_mbps);
    s.throughput_mean += r.throughput_mbps;
    s.delay_mean += r.delay_ms;
    s.drop_mean += r.drop_rate;
    s.throughput_sd += 1.0;  // reuse as count during the first pass
  }
  for (auto& s : out) {
    const double n = s.throughput_sd;
    s.throughput_mean /= n;
    s.delay_mean /= n;
    s.drop_mean /= n;
    s.throughput_sd = 0.0;
  }
  std::vector<int> counts(out.size(), 0);
  for (const auto& r : reports) {
    auto& s = find(r.agent, r.load_mbps);
    s.throughput_sd += (r.throughput_mbps - s.throughput_mean) *
                       (r.throughput_mbps - s.throughput_mean);
    s.delay_sd += (r.delay_ms - s.delay_mean) * (r.delay_ms - s.delay_mean);
    s.drop_sd += (r.drop_rate - s.drop_mean) * (r.drop_rate - s.drop_mean);
    counts[&s - out.data()]++;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int n = counts[i];
    const double div = n > 1 ? n - 1 : 1;
    out[i].throughput_sd = std::sqrt(out[i].throughput_sd / div);
    out[i].delay_sd = std::sqrt(out[i].delay_sd / div);
    out[i].drop_sd = std::sqrt(out[i].drop_sd / div);
  }
  return out;
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {
std::ofstream open_csv(const std::filesystem::path& file) {
  if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
  return out;
}
}  // namespace

void write_kpi_csv(const std::filesystem::path& file, const std::vector<KpiReport>& rows) {
  auto out = open_csv(file);
  out << "agent,load_mbps,seed,throughput_mbps,delay_ms,drop_rate,objective\n";
  for (const auto& r : rows) {
    out << r.agent << ',' << format_g6(r.load_mbps) << ',' << r.seed << ','
        << format_g6(r.throughput_mbps) << ',' << format_g6(r.delay_ms) << ','
        << format_g6(r.drop_rate) << ',' << format_g6(r.objective) << '\n';
  }
}

void write_sweep_csv(const std::filesystem::path& file, const std::vector<SweepRow>& rows) {
  auto out = open_csv(file);
  out << "threshold,load_mbps,throughput_mbps,delay_ms,drop_rate\n";
  for (const auto& r : rows) {
    out << format_g6(r.threshold) << ',' << format_g6(r.load_mbps) << ','
        << format_g6(r.throughput_mbps) << ',' << format_g6(r.delay_ms) << ','
        << format_g6(r.drop_rate) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& file, const std::vector<TraceRow>& rows) {
  auto out = open_csv(file);
  out << "step,ue,rat,q_lte,q_nr,threshold,switched\n";
  for (const auto& r : rows) {
    out << r.period << ',' << r.ue << ',' << (r.rat == Rat::Lte ? "LTE" : "NR") << ','
        << format_g6(r.q_lte) << ',' << format_g6(r.q_nr) << ','
        << format_g6(r.threshold) << ',' << r.switched << '\n';
  }
}

void write_summary_csv(const std::filesystem::path& file, const std::vector<Summary>& rows) {
  auto out = open_csv(file);
  out << "agent,load_mbps,throughput_mean,throughput_sd,delay_mean,delay_sd,"
         "drop_mean,drop_sd\n";
  for (const auto& s : rows) {
    out << s.agent << ',' << format_g6(s.load_mbps) << ',' << format_g6(s.throughput_mean)
        << ',' << format_g6(s.throughput_sd) << ',' << format_g6(s.delay_mean) << ','
        << format_g6(s.delay_sd) << ',' << format_g6(s.drop_mean) << ','
        << format_g6(s.drop_sd) << '\n';
  }
}

}  // namespace ratsteer
