#include "ratsteer/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ratsteer {

const char* traffic_type_name(TrafficType t) {
  switch (t) {
    case TrafficType::Voice: return "voice";
    case TrafficType::Video: return "video";
    case TrafficType::Gaming: return "gaming";
  }
  return "?";
}

const QoSProfile& qos_profile(TrafficType t) {
  static const QoSProfile profiles[kNumTrafficTypes] = {
      {TrafficType::Voice, 30, 0.1, 100.0},
      {TrafficType::Video, 250, 10.0, 80.0},
      {TrafficType::Gaming, 120, 5.0, 40.0},
  };
  return profiles[static_cast<int>(t)];
}

std::vector<TrafficFlow> assign_traffic_mix(int num_ues,
                                            const std::map<TrafficType, double>& proportions,
                                            std::uint64_t seed) {
  double sum = 0.0;
  for (const auto& [t, p] : proportions) sum += p;
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("assign_traffic_mix: proportions must sum to 1");

  // largest-remainder apportionment
  struct Share {
    TrafficType type;
    int count;
    double remainder;
  };
  std::vector<Share> shares;
  int assigned = 0;
  for (const auto& [t, p] : proportions) {
    const double exact = p * num_ues;
    const int base = static_cast<int>(std::floor(exact));
    shares.push_back({t, base, exact - base});
    assigned += base;
  }
  std::stable_sort(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
    if (a.remainder != b.remainder) return a.remainder > b.remainder;
    return qos_profile(a.type).min_throughput_mbps > qos_profile(b.type).min_throughput_mbps;
  });
  for (int i = 0; assigned < num_ues; ++i, ++assigned) shares[i % shares.size()].count++;

  std::vector<TrafficType> types;
  types.reserve(num_ues);
  for (const auto& s : shares) types.insert(types.end(), s.count, s.type);

  std::mt19937_64 rng(seed);
  std::shuffle(types.begin(), types.end(), rng);

  std::vector<TrafficFlow> flows(num_ues);
  for (int u = 0; u < num_ues; ++u) {
    flows[u].id = u;
    flows[u].ue = u;
    flows[u].profile = qos_profile(types[u]);
    flows[u].demand_bps = flows[u].profile.min_throughput_mbps * 1e6;
    flows[u].current_rat = Rat::Lte;
  }
  return flows;
}

std::vector<Packet> generate_arrivals(const TrafficFlow& flow, double step_duration_s,
                                      long step, std::mt19937_64& rng) {
  std::vector<Packet> out;
  if (flow.offered_load_mbps <= 0.0) return out;
  const double bits_per_pkt = flow.profile.packet_size_bytes * 8.0;
  const double mean = flow.offered_load_mbps * 1e6 * step_duration_s / bits_per_pkt;
  std::poisson_distribution<int> dist(mean);
  const int n = dist(rng);
  out.reserve(n);
  for (int i = 0; i < n; ++i)
    out.push_back({flow.id, flow.profile.packet_size_bytes, step, -1, -1});
  return out;
}

}  // namespace ratsteer
