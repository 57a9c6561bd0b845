#pragma once
// The simulated multi-RAT network: one LTE macro cell plus NR small cells,
// per-BS transmission queues, round-robin RBG scheduling and per-tick packet
// service. Stepped by the experiment harness at a 1 ms tick.

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "ratsteer/netsim.hpp"
#include "ratsteer/radio.hpp"
#include "ratsteer/traffic.hpp"

namespace ratsteer {

struct RatParams {
  double carrier_hz = 0.0;
  double tx_power_w = 0.0;
  double bandwidth_hz = 0.0;
  int num_rbgs = 1;
};

struct WorldConfig {
  double tick_s = 1e-3;
  int ue_count = 60;
  int num_gnbs = 4;
  double macro_radius_m = 500.0;
  double small_cell_ring_m = 250.0;
  double small_cell_radius_m = 100.0;  // UE clustering radius around gNBs (0 = uniform)
  std::map<TrafficType, double> traffic_mix = {
      {TrafficType::Video, 0.5}, {TrafficType::Gaming, 0.3}, {TrafficType::Voice, 0.2}};
  double per_ue_load_mbps = 10.0;
  RatParams lte{800e6, 40.0, 10e6, 10};
  RatParams nr{3.5e9, 20.0, 20e6, 20};
  double noise_psd_dbm_hz = -174.0;
  bool shadowing = false;
  double shadowing_sigma_db = 8.0;
  std::size_t queue_capacity_pkts = 500;
  // UE placement is a scenario property, not a per-run random variable: run
  // seeds vary traffic, exploration and initialization on one fixed layout,
  // so comparisons between agents are paired. Set to 0 to draw the layout
  // from the run seed instead.
  std::uint64_t topology_seed = 2024;
};

// Per-flow delivery statistics accumulated since the last window reset;
// the environment reads one controller period at a time.
struct FlowWindowStats {
  long generated_pkts = 0;
  long delivered_pkts = 0;
  double delivered_bits = 0.0;
  double sum_delay_ms = 0.0;
};

class World {
 public:
  World(const WorldConfig& cfg, std::uint64_t seed);

  void step();  // one tick: arrivals, RBG scheduling, service, accounting

  long tick() const { return tick_; }
  double tick_ms() const { return cfg_.tick_s * 1e3; }
  const WorldConfig& config() const { return cfg_; }

  const std::vector<BaseStation>& base_stations() const { return bs_; }
  const std::vector<UserEquipment>& ues() const { return ues_; }
  std::vector<TrafficFlow>& flows() { return flows_; }
  const std::vector<TrafficFlow>& flows() const { return flows_; }

  int serving_bs(int ue, Rat rat) const;
  double queue_occupancy(int bs) const { return queues_[bs].occupancy(); }
  double occupancy_of(int ue, Rat rat) const { return queues_[serving_bs(ue, rat)].occupancy(); }
  const RatQueue& queue(int bs) const { return queues_[bs]; }

  double gain(int ue, int bs) const { return gain_[ue][bs]; }

  // Wideband measurement SINR (dB) of the serving cell of the given RAT,
  // averaged over RBGs against the previous tick's interference pattern.
  double measurement_sinr_db(int ue, Rat rat) const;

  // Link capacity the UE would get on its serving cell with every RBG
  // allocated (used for feasibility diagnostics).
  double full_band_capacity_bps(int ue, Rat rat) const;

  const KpiCounters& kpi() const { return kpi_; }
  void reset_kpi() { kpi_.reset(); }

  const FlowWindowStats& window(int flow) const { return window_[flow]; }
  void reset_windows();

  // queues drained and schedulers rewound between episodes
  void reset_queues();

  // generated == delivered + dropped + queued, per traffic type
  bool conservation_holds() const;

 private:
  double interference_w(int ue, int bs, int rbg) const;
  void schedule_rbgs();

  WorldConfig cfg_;
  double noise_psd_w_hz_ = 0.0;
  std::vector<BaseStation> bs_;
  std::vector<UserEquipment> ues_;
  std::vector<TrafficFlow> flows_;
  std::vector<std::vector<double>> gain_;  // [ue][bs]
  std::vector<RatQueue> queues_;           // one per BS
  std::vector<std::vector<int>> alloc_;    // [bs][rbg] -> ue or -1, current tick
  std::vector<int> rr_ptr_;                // round-robin cursor per BS
  std::vector<std::mt19937_64> flow_rng_;
  KpiCounters kpi_;
  std::vector<FlowWindowStats> window_;
  std::vector<long> queued_pkts_by_type_;  // conservation bookkeeping
  long tick_ = 0;
};

}  // namespace ratsteer
