#include "ratsteer/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace ratsteer {

namespace {
double clip_ratio(double x) { return std::clamp(x, 0.0, kRatioClip); }
}  // namespace

std::vector<double> SteeringState::normalized(double sinr_min_db, double sinr_max_db) const {
  std::vector<double> v;
  v.reserve(kFeatures);
  for (double x : traffic_onehot) v.push_back(x);
  const double span = sinr_max_db - sinr_min_db;
  v.push_back(std::clamp((sinr_lte_db - sinr_min_db) / span, 0.0, 1.0));
  v.push_back(std::clamp((sinr_nr_db - sinr_min_db) / span, 0.0, 1.0));
  v.push_back(std::clamp(occ_lte, 0.0, 1.0));
  v.push_back(std::clamp(occ_nr, 0.0, 1.0));
  return v;
}

SteeringState observe(const TrafficFlow& flow, const World& world) {
  SteeringState s;
  s.traffic_onehot[static_cast<int>(flow.profile.type)] = 1.0;
  s.sinr_lte_db = world.measurement_sinr_db(flow.ue, Rat::Lte);
  s.sinr_nr_db = world.measurement_sinr_db(flow.ue, Rat::Nr);
  s.occ_lte = world.occupancy_of(flow.ue, Rat::Lte);
  s.occ_nr = world.occupancy_of(flow.ue, Rat::Nr);
  return s;
}

SteeringState observe_meta(const World& world) {
  SteeringState s;
  const auto& flows = world.flows();
  if (flows.empty()) return s;
  double sinr_lte = 0.0, sinr_nr = 0.0, occ_lte = 0.0, occ_nr = 0.0;
  for (const auto& f : flows) {
    s.traffic_onehot[static_cast<int>(f.profile.type)] += 1.0;
    sinr_lte += world.measurement_sinr_db(f.ue, Rat::Lte);
    sinr_nr += world.measurement_sinr_db(f.ue, Rat::Nr);
    occ_lte += world.occupancy_of(f.ue, Rat::Lte);
    occ_nr += world.occupancy_of(f.ue, Rat::Nr);
  }
  const double n = static_cast<double>(flows.size());
  for (auto& x : s.traffic_onehot) x /= n;
  s.sinr_lte_db = sinr_lte / n;
  s.sinr_nr_db = sinr_nr / n;
  s.occ_lte = occ_lte / n;
  s.occ_nr = occ_nr / n;
  return s;
}

double delay_param(double actual_delay_ms, const QoSProfile& profile) {
  if (actual_delay_ms <= 0.0) return kRatioClip;
  return clip_ratio(profile.delay_budget_ms / actual_delay_ms);
}

double throughput_param(double actual_throughput_mbps, const QoSProfile& profile) {
  return clip_ratio(actual_throughput_mbps / profile.min_throughput_mbps);
}

double intrinsic_reward(double delay_ratio, double throughput_ratio, bool handover,
                        const RewardWeights& w) {
  return w.c1 * delay_ratio + w.c2 * throughput_ratio -
         (handover ? w.handover_penalty : 0.0);
}

double extrinsic_reward(std::span<const double> intrinsic_history) {
  if (intrinsic_history.empty())
    throw std::invalid_argument("extrinsic_reward: empty history");
  double sum = 0.0;
  for (double r : intrinsic_history) sum += r;
  return sum / static_cast<double>(intrinsic_history.size());
}

SteerOutcome resolve_action(const TrafficFlow& flow, SteerAction action, const Goal& goal,
                            const World& world) {
  const Rat target = action == SteerAction::ToLte ? Rat::Lte : Rat::Nr;
  const Rat other = target == Rat::Lte ? Rat::Nr : Rat::Lte;
  SteerOutcome out;
  if (world.occupancy_of(flow.ue, target) >= goal.threshold) {
    if (world.occupancy_of(flow.ue, other) >= goal.threshold) {
      out.effective = flow.current_rat;  // both loaded: keep, avoid ping-pong
    } else {
      out.effective = other;  // load-balancing deferral
    }
  } else {
    out.effective = target;
  }
  out.overridden = out.effective != target;
  out.handover = out.effective != flow.current_rat;
  return out;
}

bool apply_action(TrafficFlow& flow, SteerAction action, const Goal& goal, World& world) {
  const SteerOutcome out = resolve_action(flow, action, goal, world);
  flow.current_rat = out.effective;
  return out.handover;
}

}  // namespace ratsteer
