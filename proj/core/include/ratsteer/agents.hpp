#pragma once
// The hierarchical agent: meta-controller picking queue-threshold goals on
// the slow timescale, controller picking per-flow RAT actions on the fast
// timescale, epsilon-greedy over both, replay training for both levels.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ratsteer/approximator.hpp"
#include "ratsteer/env.hpp"
#include "ratsteer/world.hpp"

namespace ratsteer {

struct EpsilonSchedule {
  double eps_start = 1.0;
  double eps_end = 0.05;
  long decay_steps = 1;  // defaults to half the planned training steps
};

// Linear decay to eps_end over decay_steps, constant after.
double epsilon_at(long step, const EpsilonSchedule& schedule);

// epsilon-greedy over the outputs of a net; argmax ties break to the lowest
// index.
int argmax_lowest(std::span<const double> values);
int epsilon_greedy(const ValueNet& net, std::span<const double> state, double epsilon,
                   int num_choices, std::mt19937_64& rng);

struct AgentConfig {
  std::vector<int> hidden_layers = {64, 64};
  double learning_rate = 1e-3;
  double discount = 0.9;
  std::size_t replay_capacity = 10000;
  std::size_t batch_size = 32;
  int updates_per_period = 4;  // controller SGD steps per decision period
  long target_sync_period = 200;
  double eps_start = 1.0;
  double eps_end = 0.05;
  double eps_decay_fraction = 0.5;  // fraction of training steps spent decaying
  std::vector<double> goal_set = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  RewardWeights reward;
  int ticks_per_decision = 10;
  int decisions_per_goal = 100;
  double sinr_min_db = -20.0;
  double sinr_max_db = 60.0;
};

class MetaController {
 public:
  MetaController(const AgentConfig& cfg, std::uint64_t seed);
  int select_goal(std::span<const double> state, double epsilon, std::mt19937_64& rng);
  ValueNet& net() { return net_; }
  ReplayBuffer& replay() { return replay_; }
  int num_goals() const { return num_goals_; }

 private:
  int num_goals_;
  ValueNet net_;
  ReplayBuffer replay_;
};

class Controller {
 public:
  Controller(const AgentConfig& cfg, std::uint64_t seed);
  SteerAction select_action(std::span<const double> state_with_goal, double epsilon,
                            std::mt19937_64& rng);
  ValueNet& net() { return net_; }
  ReplayBuffer& replay() { return replay_; }

 private:
  ValueNet net_;
  ReplayBuffer replay_;
};

// One row of the steering trace (per-period event log). `switched` marks a
// threshold deflection: the flow was steered away from the RAT it requested.
struct TraceRow {
  long period = 0;
  int ue = 0;
  Rat rat = Rat::Lte;  // effective RAT after the decision
  double q_lte = 0.0;
  double q_nr = 0.0;
  double threshold = 1.0;
  int switched = 0;
};

struct PeriodLog {
  long period = 0;
  double epsilon = 0.0;
  double goal_threshold = 1.0;
  int actions_lte = 0;
  int actions_nr = 0;
  int handovers = 0;
  int overrides = 0;
  double mean_intrinsic = 0.0;
  std::optional<double> extrinsic;  // set on meta decision periods
  std::optional<double> ctrl_loss;
  std::optional<double> meta_loss;
  std::vector<double> flow_rewards;  // intrinsic reward per flow this period
};

// Common surface for HRL, DQN baseline and heuristic agents.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual std::string name() const = 0;
  virtual bool trainable() const { return true; }
  // One controller period: per-flow decisions, ticks_per_decision world
  // steps, reward bookkeeping and (in training) replay updates.
  virtual PeriodLog act_period(World& world, bool eval,
                               std::vector<TraceRow>* trace = nullptr) = 0;
  virtual void end_episode(World& world) {}
  virtual void begin_eval() {}
};

class HrlAgent : public Agent {
 public:
  struct Options {
    AgentConfig cfg;
    long total_train_periods = 10000;  // sizes the epsilon decay horizon
    bool learned_meta = true;
    // Pins the goal to one index of the goal set and disables meta training;
    // the flat DQN baseline is exactly this agent with a frozen goal.
    std::optional<int> frozen_goal_index;
    std::string label = "hrl";
  };

  HrlAgent(Options opt, std::uint64_t seed);

  std::string name() const override { return opt_.label; }
  PeriodLog act_period(World& world, bool eval, std::vector<TraceRow>* trace) override;
  void end_episode(World& world) override;
  void begin_eval() override;

  Controller& controller() { return ctrl_; }
  MetaController& meta() { return meta_; }
  double active_threshold() const { return opt_.cfg.goal_set[goal_idx_]; }

  // Re-pins the queue-guard threshold of a frozen-goal agent; used by
  // threshold sweeps to evaluate one trained policy at several operating
  // thresholds. Only the guard moves — the net keeps the goal input it was
  // trained with. Throws std::logic_error when the goal is not frozen.
  void set_frozen_threshold(double th);

 private:
  std::vector<double> controller_input(const TrafficFlow& flow, const World& world,
                                       double threshold) const;
  void flush_pending_terminals();

  Options opt_;
  Controller ctrl_;
  MetaController meta_;
  std::mt19937_64 ctrl_rng_;
  std::mt19937_64 meta_rng_;

  long period_count_ = 0;
  long ctrl_steps_ = 0;    // training-only decision counter (epsilon schedule)
  long meta_steps_ = 0;
  long ctrl_updates_ = 0;
  long meta_updates_ = 0;
  EpsilonSchedule ctrl_sched_;
  EpsilonSchedule meta_sched_;

  int goal_idx_ = 0;
  std::optional<double> guard_override_;  // operating threshold for the queue guard
  int periods_into_goal_ = 0;
  bool meta_pending_ = false;
  std::vector<double> meta_state_;
  double goal_reward_sum_ = 0.0;
  long goal_reward_count_ = 0;

  bool have_prev_ = false;
  std::vector<std::vector<double>> prev_state_;
  std::vector<int> prev_action_;
  std::vector<double> prev_reward_;
};

}  // namespace ratsteer
