#include "ratsteer/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace ratsteer {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
constexpr double kRefDistanceM = 1.0;
}  // namespace

double path_loss_db(double distance_m, double carrier_hz) {
  if (distance_m <= 0.0) throw std::domain_error("path_loss_db: distance must be > 0");
  if (carrier_hz <= 0.0) throw std::domain_error("path_loss_db: frequency must be > 0");
  // free-space loss at the 1 m reference distance
  const double pl0 = 20.0 * std::log10(4.0 * M_PI * kRefDistanceM * carrier_hz / kSpeedOfLight);
  return pl0 + 10.0 * kPathLossExponent * std::log10(distance_m / kRefDistanceM);
}

double compute_sinr(const RadioLink& link, int rbg, const BaseStation& serving,
                    std::span<const InterferenceTerm> interferers) {
  if (!link.alloc[rbg]) return 0.0;
  const double signal = serving.per_rbg_power_w() * link.gain[rbg];
  double denom = serving.per_rbg_bw_hz() * link.noise_psd_w_hz;
  for (const auto& it : interferers) {
    if (it.active) denom += it.power_w * it.gain;
  }
  return signal / denom;
}

double link_capacity(const RadioLink& link, const BaseStation& serving,
                     const std::vector<std::vector<InterferenceTerm>>& per_rbg_interference) {
  const double omega = serving.per_rbg_bw_hz();
  double bps = 0.0;
  for (int psi = 0; psi < serving.num_rbgs; ++psi) {
    const double sinr = compute_sinr(link, psi, serving, per_rbg_interference[psi]);
    bps += omega * std::log2(1.0 + sinr);
  }
  return bps;
}

bool check_link_constraint(std::span<const FlowDemand> flows, double capacity_bps) {
  double demand = 0.0;
  for (const auto& f : flows) {
    if (f.bound) demand += f.demand_bps;
  }
  return demand <= capacity_bps;
}

}  // namespace ratsteer
