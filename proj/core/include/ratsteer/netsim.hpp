#pragma once
// Per-RAT FIFO transmission queues, packet service against link capacity,
// delay and drop accounting.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include "ratsteer/traffic.hpp"

namespace ratsteer {

struct DelayRecord {
  double transmission_ms = 0.0;  // D_T
  double queuing_ms = 0.0;       // D_Q
  double total_ms() const { return transmission_ms + queuing_ms; }
};

// Transmission + queuing delay of a delivered packet. capacity_bps is the
// service rate seen at delivery time.
DelayRecord delay_of(const Packet& pkt, double capacity_bps, double tick_ms);

struct KpiCounters {
  struct PerType {
    long generated_pkts = 0;
    long delivered_pkts = 0;
    long dropped_pkts = 0;
    double delivered_bits = 0.0;
    double sum_delay_ms = 0.0;
  };
  std::array<PerType, kNumTrafficTypes> by_type;

  // coarse delay histogram of delivered packets, 1 ms bins, last bin open
  static constexpr int kDelayHistBins = 4096;
  std::vector<long> delay_hist_ms = std::vector<long>(kDelayHistBins, 0);

  long generated() const;
  long delivered() const;
  long dropped() const;
  double delivered_bits() const;
  double sum_delay_ms() const;
  void record_delay(double delay_ms);
  double delay_percentile_ms(double q) const;  // q in (0,1)
  void reset() {
    by_type = {};
    std::fill(delay_hist_ms.begin(), delay_hist_ms.end(), 0);
  }
};

// Tail-drop FIFO queue of one base station. Occupancy is the packet-count
// fraction used by the steering threshold.
class RatQueue {
 public:
  RatQueue() = default;
  RatQueue(int bs, std::size_t capacity_pkts) : bs_(bs), capacity_(capacity_pkts) {}

  // Appends if there is room; a full queue drops the packet (not an error).
  bool enqueue(const Packet& pkt);

  // Dequeues head packets while the cumulative size fits in available_bits.
  // A partially served head keeps its residue for the next step.
  std::vector<Packet> serve_step(double available_bits, long now_step);

  // Per-flow service: bits_by_flow[f] is the air-interface budget earned by
  // flow f this step. Each flow's packets depart in arrival order; a
  // partially sent packet keeps its residue. Delivered packets are returned
  // in arrival order across flows.
  std::vector<Packet> serve_flows(const std::vector<double>& bits_by_flow,
                                  long now_step);

  double occupancy() const {
    return capacity_ == 0 ? 0.0 : static_cast<double>(fifo_.size()) / capacity_;
  }
  std::size_t size() const { return fifo_.size(); }
  std::size_t capacity_pkts() const { return capacity_; }
  bool empty() const { return fifo_.empty(); }
  int bs() const { return bs_; }
  const std::deque<Packet>& packets() const { return fifo_; }
  void clear();

  // packets currently queued for a given flow (maintained incrementally)
  long queued_of_flow(int flow) const;

  // total backlog in bits, net of the partially transmitted head
  double queued_bits() const { return total_bytes_ * 8.0 - head_bits_sent_; }

 private:
  int bs_ = -1;
  std::size_t capacity_ = 0;
  std::deque<Packet> fifo_;
  double head_bits_sent_ = 0.0;
  long total_bytes_ = 0;
  std::vector<long> per_flow_count_;
  std::vector<double> flow_bits_sent_;  // residue on each flow's oldest packet
};

}  // namespace ratsteer
