#include "ratsteer/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace ratsteer {

SteerAction heuristic_decide(double load_metric, double channel_metric,
                             double service_metric, const HeuristicWeights& w) {
  const double th_t = (load_metric + channel_metric + service_metric) / 3.0;
  const double big_w =
      w.load * load_metric + w.channel * channel_metric + w.service * service_metric;
  if (big_w == th_t) return SteerAction::ToLte;
  return (big_w > th_t) == w.nr_above ? SteerAction::ToNr : SteerAction::ToLte;
}

std::unique_ptr<HrlAgent> make_dqn_agent(const DqnBaselineConfig& cfg, std::uint64_t seed) {
  HrlAgent::Options opt;
  opt.cfg = cfg.cfg;
  opt.total_train_periods = cfg.total_train_periods;
  opt.learned_meta = false;
  opt.label = "dqn";
  // pin the goal input to the static threshold
  auto& gs = opt.cfg.goal_set;
  auto it = std::find_if(gs.begin(), gs.end(), [&](double g) {
    return std::abs(g - cfg.fixed_threshold) < 1e-12;
  });
  if (it == gs.end()) {
    gs.push_back(cfg.fixed_threshold);
    std::sort(gs.begin(), gs.end());
    it = std::find_if(gs.begin(), gs.end(), [&](double g) {
      return std::abs(g - cfg.fixed_threshold) < 1e-12;
    });
  }
  opt.frozen_goal_index = static_cast<int>(it - gs.begin());
  return std::make_unique<HrlAgent>(std::move(opt), seed);
}

PeriodLog HeuristicAgent::act_period(World& world, bool eval, std::vector<TraceRow>* trace) {
  auto& flows = world.flows();
  const int nf = static_cast<int>(flows.size());

  PeriodLog log;
  log.period = period_count_;
  log.flow_rewards.assign(nf, 0.0);

  std::vector<bool> handover(nf, false);
  const double sinr_span = cfg_.sinr_max_db - cfg_.sinr_min_db;
  for (int f = 0; f < nf; ++f) {
    const double occ_nr = world.occupancy_of(flows[f].ue, Rat::Nr);
    const double m_load = 1.0 - occ_nr;
    const double m_chan = std::clamp(
        (world.measurement_sinr_db(flows[f].ue, Rat::Nr) - cfg_.sinr_min_db) / sinr_span,
        0.0, 1.0);
    const double m_serv = std::clamp(flows[f].profile.min_throughput_mbps / 10.0, 0.0, 1.0);
    const SteerAction a = heuristic_decide(m_load, m_chan, m_serv, weights_);
    const Rat target = a == SteerAction::ToNr ? Rat::Nr : Rat::Lte;
    handover[f] = target != flows[f].current_rat;
    if (handover[f]) log.handovers++;
    flows[f].current_rat = target;
    if (target == Rat::Lte) log.actions_lte++; else log.actions_nr++;
    if (trace) {
      const double th_t = (m_load + m_chan + m_serv) / 3.0;
      trace->push_back({period_count_, flows[f].ue, target,
                        world.occupancy_of(flows[f].ue, Rat::Lte), occ_nr, th_t, 0});
    }
  }

  world.reset_windows();
  for (int t = 0; t < cfg_.ticks_per_decision; ++t) world.step();
  const double window_s = cfg_.ticks_per_decision * world.config().tick_s;

  double reward_sum = 0.0;
  for (int f = 0; f < nf; ++f) {
    const auto& w = world.window(f);
    const double t_mbps = w.delivered_bits / window_s / 1e6;
    double delay_ratio;
    if (w.delivered_pkts > 0) {
      delay_ratio = delay_param(w.sum_delay_ms / w.delivered_pkts, flows[f].profile);
    } else {
      const long backlog =
          world.queue(world.serving_bs(flows[f].ue, Rat::Lte)).queued_of_flow(f) +
          world.queue(world.serving_bs(flows[f].ue, Rat::Nr)).queued_of_flow(f);
      delay_ratio = backlog > 0 ? 0.0 : 1.0;
    }
    double tp_ratio = throughput_param(t_mbps, flows[f].profile);
    if (w.delivered_pkts == 0 && w.generated_pkts == 0 && delay_ratio == 1.0) tp_ratio = 1.0;
    const double r = intrinsic_reward(delay_ratio, tp_ratio, handover[f], cfg_.reward);
    log.flow_rewards[f] = r;
    reward_sum += r;
  }
  log.mean_intrinsic = reward_sum / nf;
  period_count_++;
  return log;
}

}  // namespace ratsteer
