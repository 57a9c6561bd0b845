#include "ratsteer/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ratsteer {

World::World(const WorldConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  noise_psd_w_hz_ = dbm_to_watt(cfg.noise_psd_dbm_hz);
  if (noise_psd_w_hz_ <= 0.0) throw std::invalid_argument("World: noise PSD must be > 0");

  // topology: eNB at the centre, gNBs on a ring at 90 degree spacing
  BaseStation enb;
  enb.id = 0;
  enb.rat = Rat::Lte;
  enb.tx_power_w = cfg.lte.tx_power_w;
  enb.carrier_hz = cfg.lte.carrier_hz;
  enb.bandwidth_hz = cfg.lte.bandwidth_hz;
  enb.num_rbgs = cfg.lte.num_rbgs;
  bs_.push_back(enb);
  for (int g = 0; g < cfg.num_gnbs; ++g) {
    BaseStation gnb;
    gnb.id = 1 + g;
    gnb.rat = Rat::Nr;
    const double angle = 2.0 * M_PI * g / cfg.num_gnbs;
    gnb.x_m = cfg.small_cell_ring_m * std::cos(angle);
    gnb.y_m = cfg.small_cell_ring_m * std::sin(angle);
    gnb.tx_power_w = cfg.nr.tx_power_w;
    gnb.carrier_hz = cfg.nr.carrier_hz;
    gnb.bandwidth_hz = cfg.nr.bandwidth_hz;
    gnb.num_rbgs = cfg.nr.num_rbgs;
    bs_.push_back(gnb);
  }

  std::mt19937_64 rng(cfg.topology_seed != 0 ? cfg.topology_seed : seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ues_.resize(cfg.ue_count);
  for (int u = 0; u < cfg.ue_count; ++u) {
    // uniform in the macro disk
    const double r = cfg.macro_radius_m * std::sqrt(uni(rng));
    const double a = 2.0 * M_PI * uni(rng);
    ues_[u].id = u;
    ues_[u].x_m = r * std::cos(a);
    ues_[u].y_m = r * std::sin(a);
    ues_[u].serving_lte = 0;
    // nearest gNB serves the NR leg of the dual connection
    double best = std::numeric_limits<double>::max();
    for (const auto& b : bs_) {
      if (b.rat != Rat::Nr) continue;
      const double d = std::hypot(ues_[u].x_m - b.x_m, ues_[u].y_m - b.y_m);
      if (d < best) {
        best = d;
        ues_[u].serving_nr = b.id;
      }
    }
  }

  gain_.assign(cfg.ue_count, std::vector<double>(bs_.size(), 0.0));
  std::normal_distribution<double> shadow(0.0, cfg.shadowing_sigma_db);
  for (int u = 0; u < cfg.ue_count; ++u) {
    for (std::size_t b = 0; b < bs_.size(); ++b) {
      const double d = std::max(1.0, std::hypot(ues_[u].x_m - bs_[b].x_m,
                                                ues_[u].y_m - bs_[b].y_m));
      double pl = path_loss_db(d, bs_[b].carrier_hz);
      if (cfg.shadowing) pl += shadow(rng);
      gain_[u][b] = db_to_linear(-pl);
    }
  }

  flows_ = assign_traffic_mix(cfg.ue_count, cfg.traffic_mix, seed ^ 0x9e3779b97f4a7c15ull);
  for (auto& f : flows_) f.offered_load_mbps = cfg.per_ue_load_mbps;

  queues_.reserve(bs_.size());
  for (std::size_t b = 0; b < bs_.size(); ++b)
    queues_.emplace_back(static_cast<int>(b), cfg.queue_capacity_pkts);
  alloc_.assign(bs_.size(), {});
  for (std::size_t b = 0; b < bs_.size(); ++b) alloc_[b].assign(bs_[b].num_rbgs, -1);
  rr_ptr_.assign(bs_.size(), 0);

  flow_rng_.reserve(cfg.ue_count);
  for (int f = 0; f < cfg.ue_count; ++f)
    flow_rng_.emplace_back(seed * 0x100000001b3ull + 0x5deece66dull * (f + 1));

  window_.assign(cfg.ue_count, {});
  queued_pkts_by_type_.assign(kNumTrafficTypes, 0);
}

int World::serving_bs(int ue, Rat rat) const {
  return rat == Rat::Lte ? ues_[ue].serving_lte : ues_[ue].serving_nr;
}

double World::interference_w(int ue, int bs, int rbg) const {
  double sum = 0.0;
  for (std::size_t mu = 0; mu < bs_.size(); ++mu) {
    if (static_cast<int>(mu) == bs) continue;
    if (bs_[mu].rat != bs_[bs].rat) continue;  // co-channel cells only
    if (rbg >= bs_[mu].num_rbgs) continue;
    if (alloc_[mu][rbg] < 0) continue;  // interferer idle on this RBG
    sum += bs_[mu].per_rbg_power_w() * gain_[ue][mu];
  }
  return sum;
}

void World::schedule_rbgs() {
  for (std::size_t b = 0; b < bs_.size(); ++b) {
    std::fill(alloc_[b].begin(), alloc_[b].end(), -1);
    // UEs with queued data at this BS, in stable id order
    std::vector<int> active;
    for (const auto& f : flows_) {
      if (queues_[b].queued_of_flow(f.id) > 0) active.push_back(f.ue);
    }
    if (active.empty()) continue;
    const int n = static_cast<int>(active.size());
    // Round-robin RBGs over the active UEs, giving each UE only as many as
    // its own backlog needs (estimated at the interference-free rate); spare
    // RBGs stay silent, so a lightly loaded cell interferes less with its
    // neighbours.
    const double omega = bs_[b].per_rbg_bw_hz();
    const double noise_w = omega * noise_psd_w_hz_;
    std::vector<double> need(n);
    for (int i = 0; i < n; ++i)
      need[i] = 8.0 * queues_[b].queued_of_flow(active[i]) *
                flows_[active[i]].profile.packet_size_bytes;
    int j = rr_ptr_[b] % n;
    for (int psi = 0; psi < bs_[b].num_rbgs; ++psi) {
      int probes = 0;
      while (probes < n && need[j] <= 0.0) {
        j = (j + 1) % n;
        ++probes;
      }
      if (probes == n) break;  // every backlog is covered
      const int u = active[j];
      alloc_[b][psi] = u;
      const double snr = bs_[b].per_rbg_power_w() * gain_[u][b] / noise_w;
      need[j] -= omega * std::log2(1.0 + snr) * cfg_.tick_s;
      j = (j + 1) % n;
    }
    rr_ptr_[b] = j;
  }
}

void World::step() {
  const long now = tick_;

  // packet arrivals
  for (auto& f : flows_) {
    const auto pkts = generate_arrivals(f, cfg_.tick_s, now, flow_rng_[f.id]);
    const int k = static_cast<int>(f.profile.type);
    auto& c = kpi_.by_type[k];
    auto& q = queues_[serving_bs(f.ue, f.current_rat)];
    for (const auto& p : pkts) {
      c.generated_pkts++;
      window_[f.id].generated_pkts++;
      if (q.enqueue(p)) {
        queued_pkts_by_type_[k]++;
      } else {
        c.dropped_pkts++;
      }
    }
  }

  schedule_rbgs();

  // per-BS service: every allocated RBG earns Shannon bits for its assigned
  // UE, and each flow's credit drains that flow's packets in arrival order
  for (std::size_t b = 0; b < bs_.size(); ++b) {
    const double omega = bs_[b].per_rbg_bw_hz();
    const double noise_w = omega * noise_psd_w_hz_;
    std::vector<double> bits_by_flow(flows_.size(), 0.0);
    for (int psi = 0; psi < bs_[b].num_rbgs; ++psi) {
      const int u = alloc_[b][psi];
      if (u < 0) continue;
      const double sinr = bs_[b].per_rbg_power_w() * gain_[u][b] /
                          (noise_w + interference_w(u, static_cast<int>(b), psi));
      bits_by_flow[u] += omega * std::log2(1.0 + sinr) * cfg_.tick_s;
    }
    for (const auto& pkt : queues_[b].serve_flows(bits_by_flow, now)) {
      const double service_rate_bps = bits_by_flow[pkt.flow] / cfg_.tick_s;
      const int k = static_cast<int>(flows_[pkt.flow].profile.type);
      const DelayRecord d = delay_of(pkt, service_rate_bps, tick_ms());
      auto& c = kpi_.by_type[k];
      c.delivered_pkts++;
      c.delivered_bits += pkt.size_bytes * 8.0;
      c.sum_delay_ms += d.total_ms();
      kpi_.record_delay(d.total_ms());
      queued_pkts_by_type_[k]--;
      auto& w = window_[pkt.flow];
      w.delivered_pkts++;
      w.delivered_bits += pkt.size_bytes * 8.0;
      w.sum_delay_ms += d.total_ms();
    }
  }

  tick_++;
}

double World::measurement_sinr_db(int ue, Rat rat) const {
  const int b = serving_bs(ue, rat);
  const double omega = bs_[b].per_rbg_bw_hz();
  const double noise_w = omega * noise_psd_w_hz_;
  double mean = 0.0;
  for (int psi = 0; psi < bs_[b].num_rbgs; ++psi)
    mean += bs_[b].per_rbg_power_w() * gain_[ue][b] / (noise_w + interference_w(ue, b, psi));
  mean /= bs_[b].num_rbgs;
  return linear_to_db(std::max(mean, 1e-30));
}

double World::full_band_capacity_bps(int ue, Rat rat) const {
  const int b = serving_bs(ue, rat);
  const double omega = bs_[b].per_rbg_bw_hz();
  const double noise_w = omega * noise_psd_w_hz_;
  double bps = 0.0;
  for (int psi = 0; psi < bs_[b].num_rbgs; ++psi) {
    const double sinr =
        bs_[b].per_rbg_power_w() * gain_[ue][b] / (noise_w + interference_w(ue, b, psi));
    bps += omega * std::log2(1.0 + sinr);
  }
  return bps;
}

void World::reset_windows() { window_.assign(window_.size(), {}); }

void World::reset_queues() {
  for (auto& q : queues_) q.clear();
  for (auto& a : alloc_) std::fill(a.begin(), a.end(), -1);
  std::fill(rr_ptr_.begin(), rr_ptr_.end(), 0);
  std::fill(queued_pkts_by_type_.begin(), queued_pkts_by_type_.end(), 0);
  kpi_.reset();
  reset_windows();
}

bool World::conservation_holds() const {
  for (int k = 0; k < kNumTrafficTypes; ++k) {
    const auto& c = kpi_.by_type[k];
    if (c.generated_pkts != c.delivered_pkts + c.dropped_pkts + queued_pkts_by_type_[k])
      return false;
  }
  return true;
}

}  // namespace ratsteer
