#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "ratsteer/env.hpp"
#include "ratsteer/world.hpp"

using namespace ratsteer;

namespace {

// tiny world: 2 UEs, one gNB. The queue must hold several ticks of service,
// otherwise it drains completely within each tick and occupancy reads zero.
WorldConfig tiny_config(double load_mbps, std::size_t cap = 500) {
  WorldConfig wc;
  wc.ue_count = 2;
  wc.num_gnbs = 1;
  wc.per_ue_load_mbps = load_mbps;
  wc.queue_capacity_pkts = cap;
  return wc;
}

// steps until the queue serving this UE on `rat` reaches the occupancy
void fill_rat(World& w, int ue, Rat rat, double occ) {
  for (auto& f : w.flows()) f.current_rat = rat;
  for (int i = 0; i < 20000 && w.occupancy_of(ue, rat) < occ; ++i) w.step();
  REQUIRE(w.occupancy_of(ue, rat) >= occ);
}

}  // namespace

TEST_CASE("delay ratio hand examples") {
  const QoSProfile& video = qos_profile(TrafficType::Video);   // budget 80 ms
  const QoSProfile& gaming = qos_profile(TrafficType::Gaming); // budget 40 ms
  CHECK(delay_param(40.0, video) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(delay_param(80.0, video) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(delay_param(160.0, gaming) == doctest::Approx(0.25).epsilon(1e-12));
  // better-than-budget delays clip at the ratio cap instead of diverging
  CHECK(delay_param(1.0, gaming) == doctest::Approx(kRatioClip).epsilon(1e-12));
  CHECK(delay_param(0.0, video) == doctest::Approx(kRatioClip).epsilon(1e-12));
}

TEST_CASE("throughput ratio hand examples") {
  const QoSProfile& video = qos_profile(TrafficType::Video);   // 10 Mbps
  const QoSProfile& voice = qos_profile(TrafficType::Voice);   // 0.1 Mbps
  CHECK(throughput_param(5.0, video) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(throughput_param(10.0, video) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(throughput_param(0.0, video) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(throughput_param(5.0, voice) == doctest::Approx(kRatioClip).epsilon(1e-12));
}

TEST_CASE("intrinsic reward hand examples") {
  RewardWeights w;  // c1 = c2 = 0.5, H = 0.25
  CHECK(intrinsic_reward(1.0, 1.0, false, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(intrinsic_reward(0.5, 2.0, true, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(intrinsic_reward(2.0, 0.0, false, w) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(intrinsic_reward(0.0, 0.0, true, w) == doctest::Approx(-0.25).epsilon(1e-12));
  RewardWeights skew{0.75, 0.25, 0.1};
  CHECK(intrinsic_reward(2.0, 4.0, true, skew) == doctest::Approx(2.4).epsilon(1e-12));
}

TEST_CASE("reward ratios are monotone in QoS satisfaction") {
  const QoSProfile& video = qos_profile(TrafficType::Video);
  double prev = -1.0;
  for (double t = 0.0; t <= 120.0; t += 2.5) {
    const double r = throughput_param(t, video);
    CHECK(r >= prev);
    prev = r;
  }
  prev = kRatioClip + 1.0;
  for (double d = 1.0; d <= 1000.0; d *= 1.4) {
    const double r = delay_param(d, video);
    CHECK(r <= prev);
    prev = r;
  }
}

TEST_CASE("extrinsic reward is the mean intrinsic reward") {
  const std::vector<double> hist = {1.0, 2.0, 3.0, 6.0};
  CHECK(extrinsic_reward(hist) == doctest::Approx(3.0).epsilon(1e-12));
  const std::vector<double> one = {0.7};
  CHECK(extrinsic_reward(one) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK_THROWS_AS(extrinsic_reward({}), std::invalid_argument);
}

TEST_CASE("state normalization clamps and one-hot encodes") {
  SteeringState s;
  s.traffic_onehot[static_cast<int>(TrafficType::Gaming)] = 1.0;
  s.sinr_lte_db = 20.0;
  s.sinr_nr_db = 100.0;  // above the norm range
  s.occ_lte = 0.5;
  s.occ_nr = 1.7;  // occupancies clamp into [0, 1]
  const auto v = s.normalized(-20.0, 60.0);
  REQUIRE(static_cast<int>(v.size()) == SteeringState::kFeatures);
  CHECK(v[0] == 0.0);
  CHECK(v[1] == 0.0);
  CHECK(v[2] == 1.0);
  CHECK(v[3] == doctest::Approx(0.5));
  CHECK(v[4] == 1.0);
  CHECK(v[5] == doctest::Approx(0.5));
  CHECK(v[6] == 1.0);
}

TEST_CASE("observe reflects the flow's class and the world's queues") {
  World w(tiny_config(0.0), 11);
  const auto& flow = w.flows()[0];
  const SteeringState s = observe(flow, w);
  CHECK(s.traffic_onehot[static_cast<int>(flow.profile.type)] == 1.0);
  double onehot_sum = 0.0;
  for (double x : s.traffic_onehot) onehot_sum += x;
  CHECK(onehot_sum == 1.0);
  CHECK(s.occ_lte == 0.0);
  CHECK(s.occ_nr == 0.0);
}

TEST_CASE("meta observation averages over flows") {
  World w(tiny_config(0.0), 11);
  const SteeringState s = observe_meta(w);
  double mix_sum = 0.0;
  for (double x : s.traffic_onehot) mix_sum += x;
  CHECK(mix_sum == doctest::Approx(1.0));
  CHECK(s.occ_lte == 0.0);
  CHECK(s.occ_nr == 0.0);
}

TEST_CASE("action below threshold is honored") {
  World w(tiny_config(0.0), 11);
  auto& flow = w.flows()[0];
  flow.current_rat = Rat::Lte;
  const Goal g{0.8};
  const SteerOutcome to_nr = resolve_action(flow, SteerAction::ToNr, g, w);
  CHECK(to_nr.effective == Rat::Nr);
  CHECK_FALSE(to_nr.overridden);
  CHECK(to_nr.handover);
  const SteerOutcome stay = resolve_action(flow, SteerAction::ToLte, g, w);
  CHECK(stay.effective == Rat::Lte);
  CHECK_FALSE(stay.overridden);
  CHECK_FALSE(stay.handover);
}

TEST_CASE("request into a loaded RAT deflects to the other one") {
  World w(tiny_config(500.0), 11);
  fill_rat(w, 0, Rat::Nr, 0.9);
  auto& flow = w.flows()[0];
  flow.current_rat = Rat::Nr;
  REQUIRE(w.occupancy_of(flow.ue, Rat::Lte) < 0.8);

  const Goal g{0.8};
  const SteerOutcome out = resolve_action(flow, SteerAction::ToNr, g, w);
  CHECK(out.effective == Rat::Lte);
  CHECK(out.overridden);
  CHECK(out.handover);

  // the threshold test is boundary inclusive: occupancy == Th already blocks
  const Goal exact{w.occupancy_of(flow.ue, Rat::Nr)};
  CHECK(resolve_action(flow, SteerAction::ToNr, exact, w).effective == Rat::Lte);
}

TEST_CASE("both RATs loaded keeps the current one") {
  // the post-step occupancy plateau is (cap - one tick's service) / cap, so
  // the queue has to be deep for it to exceed 0.9
  World w(tiny_config(500.0, 5000), 11);
  // saturate both queues: one overloading flow per RAT
  auto& flows = w.flows();
  REQUIRE(flows.size() == 2);
  flows[0].current_rat = Rat::Nr;
  flows[1].current_rat = Rat::Lte;
  for (int i = 0; i < 20000 && (w.occupancy_of(0, Rat::Nr) < 0.9 ||
                                w.occupancy_of(0, Rat::Lte) < 0.9); ++i)
    w.step();
  REQUIRE(w.occupancy_of(0, Rat::Nr) >= 0.9);
  REQUIRE(w.occupancy_of(0, Rat::Lte) >= 0.9);

  auto& flow = w.flows()[0];
  const Goal g{0.8};
  for (Rat current : {Rat::Lte, Rat::Nr}) {
    flow.current_rat = current;
    for (SteerAction a : {SteerAction::ToLte, SteerAction::ToNr}) {
      const SteerOutcome out = resolve_action(flow, a, g, w);
      CHECK(out.effective == current);
      CHECK_FALSE(out.handover);
    }
  }
}

TEST_CASE("apply_action mutates the flow and reports the handover") {
  World w(tiny_config(0.0), 11);
  auto& flow = w.flows()[0];
  flow.current_rat = Rat::Lte;
  const Goal g{1.0};
  CHECK(apply_action(flow, SteerAction::ToNr, g, w));
  CHECK(flow.current_rat == Rat::Nr);
  CHECK_FALSE(apply_action(flow, SteerAction::ToNr, g, w));
  CHECK(flow.current_rat == Rat::Nr);
}
