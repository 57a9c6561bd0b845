#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ratsteer/baselines.hpp"
#include "ratsteer/world.hpp"

using namespace ratsteer;

namespace {

WorldConfig tiny_config() {
  WorldConfig wc;
  wc.ue_count = 4;
  wc.num_gnbs = 1;
  wc.per_ue_load_mbps = 5.0;
  wc.queue_capacity_pkts = 50;
  return wc;
}

}  // namespace

TEST_CASE("heuristic ties always go to LTE") {
  const HeuristicWeights w;  // 0.4 / 0.4 / 0.2
  // equal metrics make the weighted sum coincide with the plain mean
  for (double m : {0.0, 0.3, 1.0}) {
    CHECK(heuristic_decide(m, m, m, w) == SteerAction::ToLte);
    HeuristicWeights flipped = w;
    flipped.nr_above = true;
    CHECK(heuristic_decide(m, m, m, flipped) == SteerAction::ToLte);
  }
}

TEST_CASE("orientation flag flips which side of the mean admits to NR") {
  // W = 0.4*(0.9 + 0.8) + 0.2*0.1 = 0.7, Th_t = 0.6: W above the mean
  HeuristicWeights w;
  w.nr_above = false;
  CHECK(heuristic_decide(0.9, 0.8, 0.1, w) == SteerAction::ToLte);
  w.nr_above = true;
  CHECK(heuristic_decide(0.9, 0.8, 0.1, w) == SteerAction::ToNr);

  // W = 0.4*(0.1 + 0.2) + 0.2*0.9 = 0.3, Th_t = 0.4: W below the mean
  w.nr_above = false;
  CHECK(heuristic_decide(0.1, 0.2, 0.9, w) == SteerAction::ToNr);
  w.nr_above = true;
  CHECK(heuristic_decide(0.1, 0.2, 0.9, w) == SteerAction::ToLte);
}

TEST_CASE("default orientation sends demanding classes to NR") {
  const HeuristicWeights w;
  // high-demand service metric with mediocre NR condition -> NR
  CHECK(heuristic_decide(0.5, 0.4, 1.0, w) == SteerAction::ToNr);
  // low-demand service on a lightly loaded, clean NR cell -> LTE
  CHECK(heuristic_decide(0.9, 0.9, 0.01, w) == SteerAction::ToLte);
}

TEST_CASE("heuristic is deterministic and memoryless") {
  const HeuristicWeights w;
  const SteerAction first = heuristic_decide(0.7, 0.3, 0.5, w);
  for (int i = 0; i < 100; ++i) {
    CHECK(heuristic_decide(0.7, 0.3, 0.5, w) == first);
    // interleave other inputs: they must not influence the next call
    heuristic_decide(static_cast<double>(i) / 100.0, 0.9, 0.1, w);
  }
}

TEST_CASE("heuristic agent is reproducible on the same world seed") {
  auto run = [] {
    HeuristicAgent agent(AgentConfig{}, HeuristicWeights{});
    World w(tiny_config(), 5);
    std::vector<double> sig;
    for (int p = 0; p < 20; ++p) {
      const PeriodLog log = agent.act_period(w, true, nullptr);
      sig.push_back(log.mean_intrinsic);
      sig.push_back(static_cast<double>(log.actions_nr));
    }
    return sig;
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("dqn factory pins the goal to the configured threshold") {
  DqnBaselineConfig cfg;
  cfg.fixed_threshold = 0.8;
  cfg.total_train_periods = 32;
  auto agent = make_dqn_agent(cfg, 3);
  CHECK(agent->active_threshold() == doctest::Approx(0.8));
  CHECK(agent->name() == "dqn");

  // a threshold outside the goal set is inserted rather than rejected
  DqnBaselineConfig odd = cfg;
  odd.fixed_threshold = 0.55;
  auto agent2 = make_dqn_agent(odd, 3);
  CHECK(agent2->active_threshold() == doctest::Approx(0.55));
}

TEST_CASE("dqn baseline equals the hierarchical agent with a frozen goal") {
  // construct both by hand: same seed, same config, same goal pin
  AgentConfig cfg;
  cfg.hidden_layers = {8};
  const int pin = 3;  // goal set index of 0.8

  DqnBaselineConfig dqn_cfg{cfg, cfg.goal_set[pin], 64};
  auto dqn = make_dqn_agent(dqn_cfg, 11);

  HrlAgent::Options opt;
  opt.cfg = cfg;
  opt.total_train_periods = 64;
  opt.frozen_goal_index = pin;
  HrlAgent frozen(std::move(opt), 11);

  World wa(tiny_config(), 7);
  World wb(tiny_config(), 7);
  for (int p = 0; p < 64; ++p) {
    const PeriodLog la = dqn->act_period(wa, false, nullptr);
    const PeriodLog lb = frozen.act_period(wb, false, nullptr);
    CHECK(la.goal_threshold == lb.goal_threshold);
    CHECK(la.actions_lte == lb.actions_lte);
    CHECK(la.actions_nr == lb.actions_nr);
    CHECK(la.handovers == lb.handovers);
    CHECK(la.mean_intrinsic == lb.mean_intrinsic);
  }
}
