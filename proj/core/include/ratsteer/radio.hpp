#pragma once
// Channel, SINR and Shannon link-capacity computation for (UE, BS) pairs,
// including inter-cell interference on shared resource block groups (RBGs).

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace ratsteer {

enum class Rat { Lte, Nr };

struct BaseStation {
  int id = -1;
  Rat rat = Rat::Lte;
  double x_m = 0.0;
  double y_m = 0.0;
  double tx_power_w = 0.0;   // total downlink power, split equally across RBGs
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  int num_rbgs = 1;

  double per_rbg_power_w() const { return tx_power_w / num_rbgs; }
  double per_rbg_bw_hz() const { return bandwidth_hz / num_rbgs; }
};

struct UserEquipment {
  int id = -1;
  double x_m = 0.0;
  double y_m = 0.0;
  int serving_lte = -1;  // dual connectivity: exactly one LTE and one NR cell
  int serving_nr = -1;
};

// Per-RBG channel state of one (UE, BS) link.
struct RadioLink {
  int ue = -1;
  int bs = -1;
  std::vector<double> gain;       // linear channel gain per RBG
  std::vector<std::uint8_t> alloc;  // allocation indicator per RBG (0/1)
  double noise_psd_w_hz = 0.0;    // single-sided AWGN PSD
};

// What one neighbouring cell contributes on a single RBG.
struct InterferenceTerm {
  double power_w = 0.0;  // interferer per-RBG transmit power
  double gain = 0.0;     // linear channel gain from interferer to the UE
  bool active = false;   // interferer allocation indicator on this RBG
};

// Log-distance path loss with a 1 m free-space reference, exponent 3.5.
double path_loss_db(double distance_m, double carrier_hz);

constexpr double kPathLossExponent = 3.5;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// SINR of one RBG of a link. Returns 0 when the RBG is not allocated.
double compute_sinr(const RadioLink& link, int rbg, const BaseStation& serving,
                    std::span<const InterferenceTerm> interferers);

// Shannon capacity of a link in bits/s, summed over allocated RBGs.
// per_rbg_interference[rbg] lists the interference terms seen on that RBG.
double link_capacity(const RadioLink& link, const BaseStation& serving,
                     const std::vector<std::vector<InterferenceTerm>>& per_rbg_interference);

struct FlowDemand {
  double demand_bps = 0.0;
  bool bound = false;  // whether the flow currently uses this link
};

// True iff the summed demand of bound flows fits within the link capacity
// (boundary inclusive).
bool check_link_constraint(std::span<const FlowDemand> flows, double capacity_bps);

}  // namespace ratsteer
