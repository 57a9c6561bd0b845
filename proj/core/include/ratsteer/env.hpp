#pragma once
// The MDP surface: state observation, threshold-gated action application
// with handover tracking, intrinsic and extrinsic rewards.

#include <array>
#include <span>
#include <vector>

#include "ratsteer/world.hpp"

namespace ratsteer {

// Shared state layout of controller and meta-controller:
// traffic-type one-hot, serving-cell SINR pair, queue-occupancy pair.
struct SteeringState {
  std::array<double, kNumTrafficTypes> traffic_onehot{};  // (Voice, Video, Gaming)
  double sinr_lte_db = 0.0;
  double sinr_nr_db = 0.0;
  double occ_lte = 0.0;
  double occ_nr = 0.0;

  static constexpr int kFeatures = kNumTrafficTypes + 4;

  // min-max normalized feature vector fed to the approximator
  std::vector<double> normalized(double sinr_min_db, double sinr_max_db) const;
};

struct Goal {
  double threshold = 1.0;  // queue-occupancy fraction from the goal set G
};

enum class SteerAction { ToLte = 0, ToNr = 1 };
constexpr int kNumActions = 2;

struct RewardWeights {
  double c1 = 0.5;              // delay weight
  double c2 = 0.5;              // throughput weight
  double handover_penalty = 0.25;  // H
};

// Reward ratios are clipped here to keep near-zero delays from exploding.
constexpr double kRatioClip = 10.0;

SteeringState observe(const TrafficFlow& flow, const World& world);

// Meta-controller view: same layout, aggregated over all flows.
SteeringState observe_meta(const World& world);

// D_QoS / D_actual, clipped to [0, kRatioClip]. A zero actual delay clips to
// the maximum instead of diverging.
double delay_param(double actual_delay_ms, const QoSProfile& profile);

// T_actual / T_QoS, clipped to [0, kRatioClip].
double throughput_param(double actual_throughput_mbps, const QoSProfile& profile);

double intrinsic_reward(double delay_ratio, double throughput_ratio, bool handover,
                        const RewardWeights& w);

// Mean of the controller's intrinsic rewards over one meta period.
double extrinsic_reward(std::span<const double> intrinsic_history);

// Applies a steering action under the active threshold goal. A target RAT
// whose queue occupancy has reached the threshold deflects the flow to the
// other RAT; with both sides at or above it the flow keeps its current RAT.
// Returns true iff the effective RAT differs from the previous one.
bool apply_action(TrafficFlow& flow, SteerAction action, const Goal& goal, World& world);

// Like apply_action but without mutating the flow; reports the effective RAT
// and whether the threshold rule overrode the request.
struct SteerOutcome {
  Rat effective = Rat::Lte;
  bool overridden = false;
  bool handover = false;
};
SteerOutcome resolve_action(const TrafficFlow& flow, SteerAction action, const Goal& goal,
                            const World& world);

// Evaluation-only objective: sum over flows of their mean logged intrinsic
// reward, with QoS feasibility diagnostics.
struct ObjectiveReport {
  double value = 0.0;
  int flows_meeting_bitrate = 0;          // delivered rate >= required rate
  int flows_with_spare_capacity = 0;      // available link rate >= required rate
  int flows_meeting_latency = 0;
  int flow_count = 0;
};

}  // namespace ratsteer
