#pragma once
// Traffic classes with QoS targets, per-UE flow assignment and Poisson
// packet arrival generation.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ratsteer/radio.hpp"

namespace ratsteer {

enum class TrafficType { Voice = 0, Video = 1, Gaming = 2 };
constexpr int kNumTrafficTypes = 3;

const char* traffic_type_name(TrafficType t);

struct QoSProfile {
  TrafficType type = TrafficType::Voice;
  int packet_size_bytes = 0;
  double min_throughput_mbps = 0.0;  // T_QoS
  double delay_budget_ms = 0.0;      // D_QoS
};

// 3GPP-style defaults: Voice (30 B, 0.1 Mbps, 100 ms), Video (250 B, 10 Mbps,
// 80 ms), Gaming (120 B, 5 Mbps, 40 ms).
const QoSProfile& qos_profile(TrafficType t);

struct TrafficFlow {
  int id = -1;
  int ue = -1;
  QoSProfile profile;
  double offered_load_mbps = 0.0;
  double demand_bps = 0.0;     // capacity demand used by the link constraint
  Rat current_rat = Rat::Lte;  // whole flow is steered, never split
};

struct Packet {
  int flow = -1;
  int size_bytes = 0;
  long arrival_step = 0;
  long service_start_step = -1;
  long depart_step = -1;  // -1 while pending
};

// One flow per UE. Realized per-type counts follow the largest-remainder
// rule; remainder ties go to the type with the higher throughput requirement.
std::vector<TrafficFlow> assign_traffic_mix(int num_ues,
                                            const std::map<TrafficType, double>& proportions,
                                            std::uint64_t seed);

// Poisson arrivals with mean offered_load * dt / packet size.
std::vector<Packet> generate_arrivals(const TrafficFlow& flow, double step_duration_s,
                                      long step, std::mt19937_64& rng);

}  // namespace ratsteer
