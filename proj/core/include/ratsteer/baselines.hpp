#pragma once
// Comparison schemes: flat DQN with a static load-balancing threshold, and a
// stateless weighted-sum threshold heuristic.

#include <memory>

#include "ratsteer/agents.hpp"

namespace ratsteer {

struct HeuristicWeights {
  double load = 0.4;     // queue headroom of the NR cell
  double channel = 0.4;  // NR link quality
  double service = 0.2;  // throughput demand of the traffic class
  // Orientation of the W vs Th_t comparison. With nr_above = true a
  // weighted sum above the plain mean admits to NR (light classes prefer
  // NR). The default pushes demanding classes to NR instead: a flow goes
  // to NR when its demand metric outweighs NR's measured condition.
  bool nr_above = false;
};

struct DqnBaselineConfig {
  AgentConfig cfg;
  double fixed_threshold = 0.8;  // Th held constant for the whole run
  long total_train_periods = 10000;
};

// Stateless steering rule: Th_t is the plain mean of the three normalized
// metrics, W their weighted sum; the side of Th_t that admits to NR is set
// by HeuristicWeights::nr_above, and ties always go to LTE.
SteerAction heuristic_decide(double load_metric, double channel_metric,
                             double service_metric, const HeuristicWeights& w);

// The DQN baseline is the hierarchical agent with the meta level removed:
// the goal input is pinned to fixed_threshold and only the per-flow
// controller keeps learning.
std::unique_ptr<HrlAgent> make_dqn_agent(const DqnBaselineConfig& cfg, std::uint64_t seed);

class HeuristicAgent : public Agent {
 public:
  HeuristicAgent(AgentConfig cfg, HeuristicWeights weights)
      : cfg_(std::move(cfg)), weights_(weights) {}

  std::string name() const override { return "heuristic"; }
  bool trainable() const override { return false; }
  PeriodLog act_period(World& world, bool eval, std::vector<TraceRow>* trace) override;

 private:
  AgentConfig cfg_;
  HeuristicWeights weights_;
  long period_count_ = 0;
};

}  // namespace ratsteer
