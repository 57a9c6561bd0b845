#include "ratsteer/netsim.hpp"

#include <cmath>
#include <stdexcept>

namespace ratsteer {

DelayRecord delay_of(const Packet& pkt, double capacity_bps, double tick_ms) {
  if (pkt.depart_step < 0) throw std::logic_error("delay_of: packet not delivered");
  DelayRecord d;
  const long start = pkt.service_start_step >= 0 ? pkt.service_start_step : pkt.depart_step;
  d.queuing_ms = static_cast<double>(start - pkt.arrival_step) * tick_ms;
  d.transmission_ms =
      capacity_bps > 0.0 ? pkt.size_bytes * 8.0 / capacity_bps * 1e3 : 0.0;
  return d;
}

long KpiCounters::generated() const {
  long n = 0;
  for (const auto& t : by_type) n += t.generated_pkts;
  return n;
}
long KpiCounters::delivered() const {
  long n = 0;
  for (const auto& t : by_type) n += t.delivered_pkts;
  return n;
}
long KpiCounters::dropped() const {
  long n = 0;
  for (const auto& t : by_type) n += t.dropped_pkts;
  return n;
}
double KpiCounters::delivered_bits() const {
  double n = 0;
  for (const auto& t : by_type) n += t.delivered_bits;
  return n;
}
double KpiCounters::sum_delay_ms() const {
  double n = 0;
  for (const auto& t : by_type) n += t.sum_delay_ms;
  return n;
}

void KpiCounters::record_delay(double delay_ms) {
  int bin = static_cast<int>(delay_ms);
  bin = std::clamp(bin, 0, kDelayHistBins - 1);
  delay_hist_ms[bin]++;
}

double KpiCounters::delay_percentile_ms(double q) const {
  const long total = delivered();
  if (total == 0) return 0.0;
  const long target = static_cast<long>(std::ceil(q * static_cast<double>(total)));
  long seen = 0;
  for (int b = 0; b < kDelayHistBins; ++b) {
    seen += delay_hist_ms[b];
    if (seen >= target) return static_cast<double>(b) + 0.5;
  }
  return static_cast<double>(kDelayHistBins);
}

bool RatQueue::enqueue(const Packet& pkt) {
  if (fifo_.size() >= capacity_) return false;
  fifo_.push_back(pkt);
  total_bytes_ += pkt.size_bytes;
  if (pkt.flow >= 0) {
    if (per_flow_count_.size() <= static_cast<std::size_t>(pkt.flow))
      per_flow_count_.resize(pkt.flow + 1, 0);
    per_flow_count_[pkt.flow]++;
  }
  return true;
}

std::vector<Packet> RatQueue::serve_step(double available_bits, long now_step) {
  std::vector<Packet> delivered;
  double budget = available_bits;
  while (!fifo_.empty() && budget > 0.0) {
    Packet& head = fifo_.front();
    if (head.service_start_step < 0) head.service_start_step = now_step;
    const double remaining = head.size_bytes * 8.0 - head_bits_sent_;
    if (budget >= remaining) {
      budget -= remaining;
      head_bits_sent_ = 0.0;
      total_bytes_ -= head.size_bytes;
      head.depart_step = now_step;
      if (head.flow >= 0 && static_cast<std::size_t>(head.flow) < per_flow_count_.size())
        per_flow_count_[head.flow]--;
      delivered.push_back(head);
      fifo_.pop_front();
    } else {
      head_bits_sent_ += budget;
      budget = 0.0;
    }
  }
  return delivered;
}

std::vector<Packet> RatQueue::serve_flows(const std::vector<double>& bits_by_flow,
                                          long now_step) {
  std::vector<Packet> delivered;
  std::vector<double> budget = bits_by_flow;
  if (flow_bits_sent_.size() < budget.size()) flow_bits_sent_.resize(budget.size(), 0.0);
  std::deque<Packet> kept;
  for (Packet& pkt : fifo_) {
    const std::size_t f = static_cast<std::size_t>(pkt.flow);
    if (f >= budget.size() || budget[f] <= 0.0) {
      kept.push_back(pkt);
      continue;
    }
    if (pkt.service_start_step < 0) pkt.service_start_step = now_step;
    const double remaining = pkt.size_bytes * 8.0 - flow_bits_sent_[f];
    if (budget[f] >= remaining) {
      budget[f] -= remaining;
      flow_bits_sent_[f] = 0.0;
      total_bytes_ -= pkt.size_bytes;
      if (f < per_flow_count_.size()) per_flow_count_[f]--;
      pkt.depart_step = now_step;
      delivered.push_back(pkt);
    } else {
      flow_bits_sent_[f] += budget[f];
      budget[f] = 0.0;
      kept.push_back(pkt);
    }
  }
  fifo_.swap(kept);
  return delivered;
}

void RatQueue::clear() {
  fifo_.clear();
  head_bits_sent_ = 0.0;
  total_bytes_ = 0;
  flow_bits_sent_.assign(flow_bits_sent_.size(), 0.0);
  per_flow_count_.assign(per_flow_count_.size(), 0);
}

long RatQueue::queued_of_flow(int flow) const {
  if (flow < 0 || static_cast<std::size_t>(flow) >= per_flow_count_.size()) return 0;
  return per_flow_count_[flow];
}

}  // namespace ratsteer
