#include "ratsteer/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ratsteer {

using nlohmann::json;

Scenario default_scenario() { return Scenario{}; }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError("config error at '" + path + "': " + msg);
}

void expect_keys(const json& obj, const std::string& path,
                 const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

double get_num(const json& obj, const std::string& path, const std::string& key,
               double fallback, double lo, double hi) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const std::string p = path.empty() ? key : path + "." + key;
  if (!v.is_number()) fail(p, "expected a number");
  const double x = v.get<double>();
  if (x < lo || x > hi)
    fail(p, "value " + std::to_string(x) + " outside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
  return x;
}

long get_int(const json& obj, const std::string& path, const std::string& key,
             long fallback, long lo, long hi) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  const std::string p = path.empty() ? key : path + "." + key;
  if (!v.is_number_integer()) fail(p, "expected an integer");
  const long x = v.get<long>();
  if (x < lo || x > hi) fail(p, "value out of range");
  return x;
}

void parse_rat(const json& obj, const std::string& path, RatParams& rp) {
  expect_keys(obj, path, {"carrier_mhz", "tx_power_w", "bandwidth_mhz", "num_rbgs"});
  rp.carrier_hz = get_num(obj, path, "carrier_mhz", rp.carrier_hz / 1e6, 1, 1e6) * 1e6;
  rp.tx_power_w = get_num(obj, path, "tx_power_w", rp.tx_power_w, 1e-3, 1e4);
  rp.bandwidth_hz = get_num(obj, path, "bandwidth_mhz", rp.bandwidth_hz / 1e6, 0.1, 1e3) * 1e6;
  rp.num_rbgs = static_cast<int>(get_int(obj, path, "num_rbgs", rp.num_rbgs, 1, 1000));
}

Scenario parse_json(const json& root) {
  if (!root.is_object()) throw ConfigError("config error: top level must be a JSON object");
  Scenario sc;
  expect_keys(root, "",
              {"ue_count", "traffic_mix", "per_ue_load_mbps", "seeds", "agent", "radio",
               "queue_capacity_pkts", "topology_seed", "tick_ms", "ticks_per_decision", "decisions_per_goal",
               "reward", "goal_set", "dqn_threshold", "heuristic_weights", "net", "epsilon",
               "train_episodes", "periods_per_episode", "eval_periods", "sinr_norm_db",
               "loads_mbps", "sweep_thresholds", "sweep_seeds", "jobs", "out_dir"});

  sc.world.ue_count = static_cast<int>(get_int(root, "", "ue_count", sc.world.ue_count, 1, 100000));

  if (root.contains("traffic_mix")) {
    const auto& mix = root.at("traffic_mix");
    expect_keys(mix, "traffic_mix", {"voice", "video", "gaming"});
    std::map<TrafficType, double> m;
    m[TrafficType::Voice] = get_num(mix, "traffic_mix", "voice", 0.2, 0.0, 1.0);
    m[TrafficType::Video] = get_num(mix, "traffic_mix", "video", 0.5, 0.0, 1.0);
    m[TrafficType::Gaming] = get_num(mix, "traffic_mix", "gaming", 0.3, 0.0, 1.0);
    double sum = 0;
    for (auto& [t, p] : m) sum += p;
    if (std::abs(sum - 1.0) > 1e-9)
      fail("traffic_mix", "proportions sum to " + std::to_string(sum) + ", expected 1");
    sc.world.traffic_mix = m;
  }

  sc.world.per_ue_load_mbps =
      get_num(root, "", "per_ue_load_mbps", sc.world.per_ue_load_mbps, 0.0, 1e4);

  if (root.contains("seeds")) {
    const auto& seeds = root.at("seeds");
    if (!seeds.is_array() || seeds.empty()) fail("seeds", "expected a non-empty array");
    sc.seeds.clear();
    for (const auto& s : seeds) {
      if (!s.is_number_integer()) fail("seeds", "expected integers");
      sc.seeds.push_back(s.get<std::uint64_t>());
    }
  }

  if (root.contains("agent")) {
    const std::string a = root.at("agent").get<std::string>();
    if (a != "hrl" && a != "dqn" && a != "heuristic")
      fail("agent", "expected one of hrl, dqn, heuristic");
    sc.agent_name = a;
  }

  if (root.contains("radio")) {
    const auto& radio = root.at("radio");
    expect_keys(radio, "radio",
                {"lte", "nr", "noise_psd_dbm_hz", "shadowing", "shadowing_sigma_db",
                 "macro_radius_m", "small_cell_ring_m", "small_cell_radius_m", "num_gnbs"});
    if (radio.contains("lte")) parse_rat(radio.at("lte"), "radio.lte", sc.world.lte);
    if (radio.contains("nr")) parse_rat(radio.at("nr"), "radio.nr", sc.world.nr);
    sc.world.noise_psd_dbm_hz =
        get_num(radio, "radio", "noise_psd_dbm_hz", sc.world.noise_psd_dbm_hz, -300, -50);
    if (radio.contains("shadowing")) sc.world.shadowing = radio.at("shadowing").get<bool>();
    sc.world.shadowing_sigma_db =
        get_num(radio, "radio", "shadowing_sigma_db", sc.world.shadowing_sigma_db, 0, 20);
    sc.world.macro_radius_m =
        get_num(radio, "radio", "macro_radius_m", sc.world.macro_radius_m, 10, 1e5);
    sc.world.small_cell_ring_m =
        get_num(radio, "radio", "small_cell_ring_m", sc.world.small_cell_ring_m, 0, 1e5);
    sc.world.small_cell_radius_m =
        get_num(radio, "radio", "small_cell_radius_m", sc.world.small_cell_radius_m, 0, 1e5);
    sc.world.num_gnbs = static_cast<int>(get_int(radio, "radio", "num_gnbs", sc.world.num_gnbs, 1, 64));
  }

  sc.world.queue_capacity_pkts = static_cast<std::size_t>(
      get_int(root, "", "queue_capacity_pkts", sc.world.queue_capacity_pkts, 1, 10000000));
  sc.world.topology_seed = static_cast<std::uint64_t>(
      get_int(root, "", "topology_seed", static_cast<long>(sc.world.topology_seed), 0,
              std::numeric_limits<long>::max()));
  sc.world.tick_s = get_num(root, "", "tick_ms", sc.world.tick_s * 1e3, 1e-3, 1e3) * 1e-3;
  sc.agent.ticks_per_decision = static_cast<int>(
      get_int(root, "", "ticks_per_decision", sc.agent.ticks_per_decision, 1, 100000));
  sc.agent.decisions_per_goal = static_cast<int>(
      get_int(root, "", "decisions_per_goal", sc.agent.decisions_per_goal, 1, 1000000));

  if (root.contains("reward")) {
    const auto& rw = root.at("reward");
    expect_keys(rw, "reward", {"c1", "c2", "handover_penalty"});
    sc.agent.reward.c1 = get_num(rw, "reward", "c1", sc.agent.reward.c1, 0, 1);
    sc.agent.reward.c2 = get_num(rw, "reward", "c2", sc.agent.reward.c2, 0, 1);
    sc.agent.reward.handover_penalty =
        get_num(rw, "reward", "handover_penalty", sc.agent.reward.handover_penalty, 0, 100);
    if (std::abs(sc.agent.reward.c1 + sc.agent.reward.c2 - 1.0) > 1e-9)
      fail("reward", "c1 + c2 must equal 1");
  }

  if (root.contains("goal_set")) {
    const auto& gs = root.at("goal_set");
    if (!gs.is_array() || gs.empty()) fail("goal_set", "expected a non-empty array");
    std::vector<double> g;
    for (const auto& v : gs) {
      const double th = v.get<double>();
      if (th <= 0.0 || th > 1.0) fail("goal_set", "thresholds must lie in (0, 1]");
      g.push_back(th);
    }
    for (std::size_t i = 1; i < g.size(); ++i)
      if (g[i] <= g[i - 1]) fail("goal_set", "thresholds must be strictly ascending");
    sc.agent.goal_set = g;
  }

  sc.dqn_threshold = get_num(root, "", "dqn_threshold", sc.dqn_threshold, 1e-9, 1.0);

  if (root.contains("heuristic_weights")) {
    const auto& hw = root.at("heuristic_weights");
    expect_keys(hw, "heuristic_weights", {"load", "channel", "service", "nr_above"});
    if (hw.contains("nr_above")) {
      if (!hw.at("nr_above").is_boolean())
        throw ConfigError("heuristic_weights.nr_above: expected a boolean");
      sc.heuristic.nr_above = hw.at("nr_above").get<bool>();
    }
    sc.heuristic.load = get_num(hw, "heuristic_weights", "load", sc.heuristic.load, 0, 10);
    sc.heuristic.channel =
        get_num(hw, "heuristic_weights", "channel", sc.heuristic.channel, 0, 10);
    sc.heuristic.service =
        get_num(hw, "heuristic_weights", "service", sc.heuristic.service, 0, 10);
  }

  if (root.contains("net")) {
    const auto& net = root.at("net");
    expect_keys(net, "net",
                {"hidden", "learning_rate", "discount", "replay_capacity", "batch_size",
                 "target_sync_period", "updates_per_period"});
    if (net.contains("hidden")) {
      sc.agent.hidden_layers.clear();
      for (const auto& h : net.at("hidden"))
        sc.agent.hidden_layers.push_back(h.get<int>());
    }
    sc.agent.learning_rate = get_num(net, "net", "learning_rate", sc.agent.learning_rate, 0, 1);
    sc.agent.discount = get_num(net, "net", "discount", sc.agent.discount, 0, 1);
    sc.agent.replay_capacity = static_cast<std::size_t>(
        get_int(net, "net", "replay_capacity", sc.agent.replay_capacity, 1, 100000000));
    sc.agent.batch_size = static_cast<std::size_t>(
        get_int(net, "net", "batch_size", sc.agent.batch_size, 1, 100000));
    sc.agent.target_sync_period =
        get_int(net, "net", "target_sync_period", sc.agent.target_sync_period, 1, 1000000);
    sc.agent.updates_per_period =
        get_int(net, "net", "updates_per_period", sc.agent.updates_per_period, 1, 1024);
  }

  if (root.contains("epsilon")) {
    const auto& e = root.at("epsilon");
    expect_keys(e, "epsilon", {"start", "end", "decay_fraction"});
    sc.agent.eps_start = get_num(e, "epsilon", "start", sc.agent.eps_start, 0, 1);
    sc.agent.eps_end = get_num(e, "epsilon", "end", sc.agent.eps_end, 0, 1);
    sc.agent.eps_decay_fraction =
        get_num(e, "epsilon", "decay_fraction", sc.agent.eps_decay_fraction, 0, 1);
  }

  sc.train_episodes =
      static_cast<int>(get_int(root, "", "train_episodes", sc.train_episodes, 0, 10000));
  sc.periods_per_episode =
      get_int(root, "", "periods_per_episode", sc.periods_per_episode, 1, 100000000);
  sc.eval_periods = get_int(root, "", "eval_periods", sc.eval_periods, 1, 100000000);

  if (root.contains("sinr_norm_db")) {
    const auto& nb = root.at("sinr_norm_db");
    if (!nb.is_array() || nb.size() != 2) fail("sinr_norm_db", "expected [min, max]");
    sc.agent.sinr_min_db = nb[0].get<double>();
    sc.agent.sinr_max_db = nb[1].get<double>();
    if (sc.agent.sinr_min_db >= sc.agent.sinr_max_db) fail("sinr_norm_db", "min must be < max");
  }

  if (root.contains("loads_mbps")) {
    sc.loads_mbps.clear();
    for (const auto& v : root.at("loads_mbps")) {
      const double load = v.get<double>();
      if (load < 0.0 || load > 1e4) fail("loads_mbps", "load out of range");
      sc.loads_mbps.push_back(load);
    }
  }
  if (root.contains("sweep_thresholds")) {
    sc.sweep_thresholds.clear();
    for (const auto& v : root.at("sweep_thresholds")) {
      const double th = v.get<double>();
      if (th <= 0.0 || th > 1.0) fail("sweep_thresholds", "thresholds must lie in (0, 1]");
      sc.sweep_thresholds.push_back(th);
    }
  }
  sc.sweep_seeds = static_cast<int>(get_int(root, "", "sweep_seeds", sc.sweep_seeds, 1, 1000));
  sc.jobs = static_cast<int>(get_int(root, "", "jobs", sc.jobs, 0, 4096));
  if (root.contains("out_dir")) sc.out_dir = root.at("out_dir").get<std::string>();

  return sc;
}

}  // namespace

Scenario parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_json(root);
}

Scenario parse_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return default_scenario();
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string serialize_config(const Scenario& sc) {
  json root;
  root["ue_count"] = sc.world.ue_count;
  root["traffic_mix"] = {
      {"voice", sc.world.traffic_mix.at(TrafficType::Voice)},
      {"video", sc.world.traffic_mix.at(TrafficType::Video)},
      {"gaming", sc.world.traffic_mix.at(TrafficType::Gaming)}};
  root["per_ue_load_mbps"] = sc.world.per_ue_load_mbps;
  root["seeds"] = sc.seeds;
  root["agent"] = sc.agent_name;
  root["radio"] = {
      {"lte",
       {{"carrier_mhz", sc.world.lte.carrier_hz / 1e6},
        {"tx_power_w", sc.world.lte.tx_power_w},
        {"bandwidth_mhz", sc.world.lte.bandwidth_hz / 1e6},
        {"num_rbgs", sc.world.lte.num_rbgs}}},
      {"nr",
       {{"carrier_mhz", sc.world.nr.carrier_hz / 1e6},
        {"tx_power_w", sc.world.nr.tx_power_w},
        {"bandwidth_mhz", sc.world.nr.bandwidth_hz / 1e6},
        {"num_rbgs", sc.world.nr.num_rbgs}}},
      {"noise_psd_dbm_hz", sc.world.noise_psd_dbm_hz},
      {"shadowing", sc.world.shadowing},
      {"shadowing_sigma_db", sc.world.shadowing_sigma_db},
      {"macro_radius_m", sc.world.macro_radius_m},
      {"small_cell_ring_m", sc.world.small_cell_ring_m},
      {"small_cell_radius_m", sc.world.small_cell_radius_m},
      {"num_gnbs", sc.world.num_gnbs}};
  root["queue_capacity_pkts"] = sc.world.queue_capacity_pkts;
  root["topology_seed"] = sc.world.topology_seed;
  root["tick_ms"] = sc.world.tick_s * 1e3;
  root["ticks_per_decision"] = sc.agent.ticks_per_decision;
  root["decisions_per_goal"] = sc.agent.decisions_per_goal;
  root["reward"] = {{"c1", sc.agent.reward.c1},
                    {"c2", sc.agent.reward.c2},
                    {"handover_penalty", sc.agent.reward.handover_penalty}};
  root["goal_set"] = sc.agent.goal_set;
  root["dqn_threshold"] = sc.dqn_threshold;
  root["heuristic_weights"] = {{"load", sc.heuristic.load},
                               {"channel", sc.heuristic.channel},
                               {"service", sc.heuristic.service},
                               {"nr_above", sc.heuristic.nr_above}};
  root["net"] = {{"hidden", sc.agent.hidden_layers},
                 {"learning_rate", sc.agent.learning_rate},
                 {"discount", sc.agent.discount},
                 {"replay_capacity", sc.agent.replay_capacity},
                 {"batch_size", sc.agent.batch_size},
                 {"target_sync_period", sc.agent.target_sync_period},
                 {"updates_per_period", sc.agent.updates_per_period}};
  root["epsilon"] = {{"start", sc.agent.eps_start},
                     {"end", sc.agent.eps_end},
                     {"decay_fraction", sc.agent.eps_decay_fraction}};
  root["train_episodes"] = sc.train_episodes;
  root["periods_per_episode"] = sc.periods_per_episode;
  root["eval_periods"] = sc.eval_periods;
  root["sinr_norm_db"] = {sc.agent.sinr_min_db, sc.agent.sinr_max_db};
  root["loads_mbps"] = sc.loads_mbps;
  root["sweep_thresholds"] = sc.sweep_thresholds;
  root["sweep_seeds"] = sc.sweep_seeds;
  root["jobs"] = sc.jobs;
  root["out_dir"] = sc.out_dir;
  return root.dump(2);
}

}  // namespace ratsteer
