#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ratsteer/radio.hpp"

using namespace ratsteer;

namespace {

// Independent straightforward re-implementation of the per-RBG capacity sum,
// kept deliberately naive. Used as the oracle for link_capacity.
double capacity_oracle(const RadioLink& link, const BaseStation& serving,
                       const std::vector<std::vector<InterferenceTerm>>& interf) {
  double total = 0.0;
  for (int psi = 0; psi < serving.num_rbgs; ++psi) {
    const double omega = serving.bandwidth_hz / serving.num_rbgs;
    double denom = omega * link.noise_psd_w_hz;
    for (const auto& it : interf[psi])
      if (it.active) denom += it.power_w * it.gain;
    const double num =
        (serving.tx_power_w / serving.num_rbgs) * link.gain[psi] * (link.alloc[psi] ? 1.0 : 0.0);
    total += omega * std::log2(1.0 + num / denom);
  }
  return total;
}

BaseStation make_bs(int rbgs, double power_w = 1.0, double bw_hz = 1.8e6) {
  BaseStation bs;
  bs.id = 0;
  bs.num_rbgs = rbgs;
  bs.tx_power_w = power_w;
  bs.bandwidth_hz = bw_hz;
  bs.carrier_hz = 2e9;
  return bs;
}

RadioLink make_link(int rbgs, double gain, double noise_psd) {
  RadioLink l;
  l.gain.assign(rbgs, gain);
  l.alloc.assign(rbgs, 1);
  l.noise_psd_w_hz = noise_psd;
  return l;
}

}  // namespace

TEST_CASE("path loss free-space reference at 1 m") {
  // 20*log10(4*pi*d0*f/c) evaluated independently
  const double f = 3.5e9;
  const double expected = 20.0 * std::log10(4.0 * M_PI * 1.0 * f / 299792458.0);
  CHECK(path_loss_db(1.0, f) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(43.3).epsilon(1e-3));
}

TEST_CASE("path loss adds 10*n per decade") {
  const double f = 3.5e9;
  CHECK(path_loss_db(10.0, f) - path_loss_db(1.0, f) == doctest::Approx(35.0).epsilon(1e-12));
}

TEST_CASE("path loss is monotone in distance and frequency") {
  CHECK(path_loss_db(100.0, 800e6) < path_loss_db(100.0, 3.5e9));
  double prev = 0.0;
  for (double d = 1.0; d < 1e4; d *= 1.7) {
    const double pl = path_loss_db(d, 800e6);
    CHECK(pl >= prev);
    prev = pl;
  }
}

TEST_CASE("path loss rejects non-positive inputs") {
  CHECK_THROWS_AS(path_loss_db(0.0, 1e9), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(-1.0, 1e9), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(10.0, 0.0), std::domain_error);
}

TEST_CASE("sinr of an unallocated RBG is zero") {
  auto bs = make_bs(1);
  auto link = make_link(1, 1e-9, 4e-21);
  link.alloc[0] = 0;
  CHECK(compute_sinr(link, 0, bs, {}) == 0.0);
}

TEST_CASE("sinr scalar evaluation without interferers") {
  // rho = 1 W, g = 1e-9, omega * X0 = 1e-12 W -> sinr = 1000
  auto bs = make_bs(1, 1.0, 1.0);  // omega = 1 Hz
  auto link = make_link(1, 1e-9, 1e-12);
  CHECK(compute_sinr(link, 0, bs, {}) == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("sinr approaches one with a symmetric interferer and negligible noise") {
  auto bs = make_bs(1, 1.0, 1.0);
  auto link = make_link(1, 1e-9, 1e-30);
  const InterferenceTerm interferer{1.0, 1e-9, true};
  CHECK(compute_sinr(link, 0, bs, {&interferer, 1}) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("capacity of a single RBG at sinr 3") {
  // 180 kHz * log2(4) = 360 kbit/s
  auto bs = make_bs(1, 1.0, 180e3);
  const double noise_w = 180e3 * 4e-21;
  auto link = make_link(1, 3.0 * noise_w / 1.0, 4e-21);
  std::vector<std::vector<InterferenceTerm>> interf(1);
  CHECK(link_capacity(link, bs, interf) == doctest::Approx(360e3).epsilon(1e-12));
}

TEST_CASE("capacity is zero when nothing is allocated or all sinr vanish") {
  auto bs = make_bs(4);
  auto link = make_link(4, 1e-9, 4e-21);
  link.alloc.assign(4, 0);
  std::vector<std::vector<InterferenceTerm>> interf(4);
  CHECK(link_capacity(link, bs, interf) == 0.0);
  auto dead = make_link(4, 0.0, 4e-21);
  CHECK(link_capacity(dead, bs, interf) == 0.0);
}

TEST_CASE("capacity matches the brute-force oracle on random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int rbgs = 1 + static_cast<int>(uni(rng) * 8);
    const int n_interferers = static_cast<int>(uni(rng) * 4);
    auto bs = make_bs(rbgs, 0.5 + uni(rng) * 40.0, (1.0 + uni(rng) * 19.0) * 1e6);
    RadioLink link;
    link.noise_psd_w_hz = 4e-21;
    for (int psi = 0; psi < rbgs; ++psi) {
      link.gain.push_back(std::pow(10.0, -(6.0 + 8.0 * uni(rng))));
      link.alloc.push_back(uni(rng) < 0.7 ? 1 : 0);
    }
    std::vector<std::vector<InterferenceTerm>> interf(rbgs);
    for (int psi = 0; psi < rbgs; ++psi)
      for (int i = 0; i < n_interferers; ++i)
        interf[psi].push_back({0.5 + uni(rng) * 40.0,
                               std::pow(10.0, -(6.0 + 8.0 * uni(rng))), uni(rng) < 0.5});
    const double got = link_capacity(link, bs, interf);
    const double want = capacity_oracle(link, bs, interf);
    CHECK(got == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("capacity monotonicity in serving gain and interference") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int rbgs = 1 + static_cast<int>(uni(rng) * 8);
    auto bs = make_bs(rbgs, 10.0, 10e6);
    auto link = make_link(rbgs, std::pow(10.0, -(6.0 + 6.0 * uni(rng))), 4e-21);
    std::vector<std::vector<InterferenceTerm>> interf(rbgs);
    const double base = link_capacity(link, bs, interf);

    auto boosted = link;
    for (auto& g : boosted.gain) g *= 1.0 + uni(rng);
    CHECK(link_capacity(boosted, bs, interf) >= base);

    auto noisy = interf;
    for (auto& terms : noisy) terms.push_back({5.0, 1e-8, true});
    CHECK(link_capacity(link, bs, noisy) <= base);

    // a zero-power interferer contributes exactly nothing
    auto nop = interf;
    for (auto& terms : nop) terms.push_back({0.0, 1e-5, true});
    CHECK(link_capacity(link, bs, nop) == base);
  }
}

TEST_CASE("link constraint is boundary inclusive") {
  CHECK(check_link_constraint({}, 0.0));  // empty sum
  const FlowDemand exact{1e6, true};
  CHECK(check_link_constraint({&exact, 1}, 1e6));
  const FlowDemand over{1e6 + 1e-3, true};
  CHECK_FALSE(check_link_constraint({&over, 1}, 1e6));
  const FlowDemand unbound{1e9, false};
  CHECK(check_link_constraint({&unbound, 1}, 0.0));
}
