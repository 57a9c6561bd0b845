#include "ratsteer/agents.hpp"

#include <algorithm>
#include <cmath>

namespace ratsteer {

double epsilon_at(long step, const EpsilonSchedule& s) {
  if (s.decay_steps <= 0 || step >= s.decay_steps) return s.eps_end;
  const double frac = static_cast<double>(step) / static_cast<double>(s.decay_steps);
  return s.eps_start + (s.eps_end - s.eps_start) * frac;
}

int argmax_lowest(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

int epsilon_greedy(const ValueNet& net, std::span<const double> state, double epsilon,
                   int num_choices, std::mt19937_64& rng) {
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) <= epsilon) {
      std::uniform_int_distribution<int> pick(0, num_choices - 1);
      return pick(rng);
    }
  }
  const auto q = net.forward(state);
  return argmax_lowest(q);
}

MetaController::MetaController(const AgentConfig& cfg, std::uint64_t seed)
    : num_goals_(static_cast<int>(cfg.goal_set.size())),
      net_([&] {
        std::vector<int> sizes{SteeringState::kFeatures};
        sizes.insert(sizes.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
        sizes.push_back(static_cast<int>(cfg.goal_set.size()));
        return sizes;
      }(), cfg.learning_rate, cfg.discount, seed),
      replay_(cfg.replay_capacity, cfg.batch_size) {}

int MetaController::select_goal(std::span<const double> state, double epsilon,
                                std::mt19937_64& rng) {
  return epsilon_greedy(net_, state, epsilon, num_goals_, rng);
}

Controller::Controller(const AgentConfig& cfg, std::uint64_t seed)
    : net_([&] {
        std::vector<int> sizes{SteeringState::kFeatures + 1};  // + goal threshold
        sizes.insert(sizes.end(), cfg.hidden_layers.begin(), cfg.hidden_layers.end());
        sizes.push_back(kNumActions);
        return sizes;
      }(), cfg.learning_rate, cfg.discount, seed),
      replay_(cfg.replay_capacity, cfg.batch_size) {}

SteerAction Controller::select_action(std::span<const double> state_with_goal,
                                      double epsilon, std::mt19937_64& rng) {
  return static_cast<SteerAction>(
      epsilon_greedy(net_, state_with_goal, epsilon, kNumActions, rng));
}

HrlAgent::HrlAgent(Options opt, std::uint64_t seed)
    : opt_(std::move(opt)),
      ctrl_(opt_.cfg, seed * 0x9e3779b97f4a7c15ull + 1),
      meta_(opt_.cfg, seed * 0x9e3779b97f4a7c15ull + 2),
      ctrl_rng_(seed * 0x9e3779b97f4a7c15ull + 3),
      meta_rng_(seed * 0x9e3779b97f4a7c15ull + 4) {
  const long ctrl_decay = static_cast<long>(
      opt_.cfg.eps_decay_fraction * static_cast<double>(opt_.total_train_periods));
  ctrl_sched_ = {opt_.cfg.eps_start, opt_.cfg.eps_end, std::max(1L, ctrl_decay)};
  const long meta_decisions = opt_.total_train_periods / opt_.cfg.decisions_per_goal;
  meta_sched_ = {opt_.cfg.eps_start, opt_.cfg.eps_end,
                 std::max(1L, static_cast<long>(opt_.cfg.eps_decay_fraction *
                                                static_cast<double>(meta_decisions)))};
  if (opt_.frozen_goal_index) goal_idx_ = *opt_.frozen_goal_index;
}

std::vector<double> HrlAgent::controller_input(const TrafficFlow& flow, const World& world,
                                               double threshold) const {
  auto x = observe(flow, world).normalized(opt_.cfg.sinr_min_db, opt_.cfg.sinr_max_db);
  x.push_back(threshold);
  return x;
}

PeriodLog HrlAgent::act_period(World& world, bool eval, std::vector<TraceRow>* trace) {
  const AgentConfig& cfg = opt_.cfg;
  auto& flows = world.flows();
  const int nf = static_cast<int>(flows.size());

  PeriodLog log;
  log.period = period_count_;
  log.epsilon = eval ? 0.0 : epsilon_at(ctrl_steps_, ctrl_sched_);
  log.flow_rewards.assign(nf, 0.0);

  const bool learned = opt_.learned_meta && !opt_.frozen_goal_index;

  // meta decision boundary
  if (periods_into_goal_ == 0) {
    if (learned) {
      const auto mfeat =
          observe_meta(world).normalized(cfg.sinr_min_db, cfg.sinr_max_db);
      if (meta_pending_ && goal_reward_count_ > 0) {
        const double r_ex = goal_reward_sum_ / static_cast<double>(goal_reward_count_);
        log.extrinsic = r_ex;
        if (!eval) {
          meta_.replay().push({meta_state_, goal_idx_, r_ex, mfeat, false});
          if (meta_.replay().ready()) {
            for (int u = 0; u < cfg.updates_per_period; ++u) {
              log.meta_loss = meta_.net().td_update(meta_.replay().sample(meta_rng_));
              if (++meta_updates_ % cfg.target_sync_period == 0) meta_.net().sync_target();
            }
          }
        }
      }
      const double eps_m = eval ? 0.0 : epsilon_at(meta_steps_, meta_sched_);
      goal_idx_ = meta_.select_goal(mfeat, eps_m, meta_rng_);
      if (!eval) {
        meta_steps_++;
        meta_state_ = mfeat;
        meta_pending_ = true;
      }
    }
    goal_reward_sum_ = 0.0;
    goal_reward_count_ = 0;
  }
  const double th = cfg.goal_set[goal_idx_];
  const double guard = guard_override_.value_or(th);
  log.goal_threshold = guard;

  // observe, close out the previous period's transitions
  std::vector<std::vector<double>> obs(nf);
  for (int f = 0; f < nf; ++f) obs[f] = controller_input(flows[f], world, th);
  if (!eval && have_prev_) {
    for (int f = 0; f < nf; ++f)
      ctrl_.replay().push({prev_state_[f], prev_action_[f], prev_reward_[f], obs[f], false});
  }

  // act
  std::vector<bool> handover(nf, false);
  std::vector<int> action(nf, 0);
  for (int f = 0; f < nf; ++f) {
    const SteerAction a = ctrl_.select_action(obs[f], log.epsilon, ctrl_rng_);
    action[f] = static_cast<int>(a);
    const SteerOutcome out = resolve_action(flows[f], a, Goal{guard}, world);
    handover[f] = out.handover;
    flows[f].current_rat = out.effective;
    if (out.effective == Rat::Lte) log.actions_lte++; else log.actions_nr++;
    if (out.handover) log.handovers++;
    if (out.overridden) log.overrides++;
    if (trace) {
      trace->push_back({period_count_, flows[f].ue, out.effective,
                        world.occupancy_of(flows[f].ue, Rat::Lte),
                        world.occupancy_of(flows[f].ue, Rat::Nr), guard,
                        out.overridden ? 1 : 0});
    }
  }

  // advance the world one controller period
  world.reset_windows();
  for (int t = 0; t < cfg.ticks_per_decision; ++t) world.step();
  const double window_s = cfg.ticks_per_decision * world.config().tick_s;

  // rewards from the window just simulated
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
      // nothing delivered: stuck traffic is the worst case, an idle flow is
      // neutral
      delay_ratio = backlog > 0 ? 0.0 : 1.0;
    }
    double tp_ratio = throughput_param(t_mbps, flows[f].profile);
    if (w.delivered_pkts == 0 && w.generated_pkts == 0 && delay_ratio == 1.0) tp_ratio = 1.0;
    const double r = intrinsic_reward(delay_ratio, tp_ratio, handover[f], cfg.reward);
    log.flow_rewards[f] = r;
    reward_sum += r;
  }
  log.mean_intrinsic = reward_sum / nf;
  goal_reward_sum_ += reward_sum;
  goal_reward_count_ += nf;

  if (!eval) {
    prev_state_ = std::move(obs);
    prev_action_ = std::move(action);
    prev_reward_ = log.flow_rewards;
    have_prev_ = true;
    if (ctrl_.replay().ready()) {
      for (int u = 0; u < cfg.updates_per_period; ++u) {
        log.ctrl_loss = ctrl_.net().td_update(ctrl_.replay().sample(ctrl_rng_));
        if (++ctrl_updates_ % cfg.target_sync_period == 0) ctrl_.net().sync_target();
      }
    }
    ctrl_steps_++;
  }

  periods_into_goal_ = (periods_into_goal_ + 1) % cfg.decisions_per_goal;
  period_count_++;
  return log;
}

void HrlAgent::flush_pending_terminals() {
  if (have_prev_) {
    for (std::size_t f = 0; f < prev_state_.size(); ++f)
      ctrl_.replay().push(
          {prev_state_[f], prev_action_[f], prev_reward_[f], prev_state_[f], true});
    have_prev_ = false;
  }
  if (meta_pending_ && goal_reward_count_ > 0) {
    const double r_ex = goal_reward_sum_ / static_cast<double>(goal_reward_count_);
    meta_.replay().push({meta_state_, goal_idx_, r_ex, meta_state_, true});
  }
  meta_pending_ = false;
}

void HrlAgent::end_episode(World& world) {
  flush_pending_terminals();
  periods_into_goal_ = 0;
  goal_reward_sum_ = 0.0;
  goal_reward_count_ = 0;
  world.reset_queues();
}

void HrlAgent::set_frozen_threshold(double th) {
  if (!opt_.frozen_goal_index)
    throw std::logic_error("set_frozen_threshold: goal is not frozen");
  guard_override_ = th;
}

void HrlAgent::begin_eval() {
  have_prev_ = false;
  meta_pending_ = false;
  periods_into_goal_ = 0;
  goal_reward_sum_ = 0.0;
  goal_reward_count_ = 0;
}

}  // namespace ratsteer
