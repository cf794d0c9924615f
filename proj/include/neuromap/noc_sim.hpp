#pragma once

// Discrete-event simulation of spike (AER event) traffic on the tile mesh.
//
// Every inter-cluster link injects its Spk events between its two tiles,
// routed X first, then Y. Each directed mesh channel serves one event per
// 1/BW seconds from a FIFO output queue of OutB events into the downstream
// tile's input buffer of InB events. A channel only starts service when the
// input buffer has a free slot; an event that cannot enter the next output
// queue stays at the head of its input buffer (credit-based backpressure).
// Nothing is ever dropped.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

#include "neuromap/energy.hpp"
#include "neuromap/model.hpp"
#include "neuromap/rng.hpp"

namespace neuromap {

enum class InjectionMode {
  uniform,  // event i of k at i * horizon / k
  poisson,  // k sorted uniform times on [0, horizon), i.e. a Poisson train with k arrivals
};

struct SimConfig {
  double horizon = 1e-3;  // s
  std::uint64_t seed = 0;
  InjectionMode injection = InjectionMode::uniform;
  bool drain = true;         // run until every event is delivered; else stop at horizon
  bool record_trace = false;
};

/// One channel service of one event.
struct HopRecord {
  std::uint64_t spike = 0;
  std::uint32_t channel = 0;
  double enqueued = 0.0;
  double start = 0.0;
  double end = 0.0;
};

struct ChannelStats {
  std::uint32_t id = 0;
  TileCoord from;
  TileCoord to;
  std::uint64_t events = 0;
  double busy_time = 0.0;
  double utilization = 0.0;
  std::uint64_t credit_stalls = 0;
};

struct LatencyReport {
  double mean_latency = 0.0;
  double max_latency = 0.0;
  std::uint64_t injected = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;  // inside the network when the run stopped
  std::uint64_t blocked = 0;    // still held at the source when the run stopped
  double end_time = 0.0;
  /// Channels whose offered load exceeds what they can carry within the
  /// horizon; their events necessarily finish late.
  std::uint64_t overloaded_channels = 0;
  std::vector<ChannelStats> channels;
  std::vector<double> latencies;  // per delivered event, in delivery order
  std::vector<HopRecord> trace;
};

namespace detail {

enum Direction : std::uint32_t { kEast = 0, kWest = 1, kNorth = 2, kSouth = 3 };

inline std::uint32_t channel_id(const HardwareModel& hw, TileCoord from, Direction d) {
  return static_cast<std::uint32_t>(hw.tile_index(from) * 4 + d);
}

inline TileCoord step(TileCoord t, Direction d) {
  switch (d) {
    case kEast: return {t.x + 1, t.y};
    case kWest: return {t.x - 1, t.y};
    case kNorth: return {t.x, t.y + 1};
    case kSouth: return {t.x, t.y - 1};
  }
  return t;
}

/// Channels visited from `a` to `b` under X-Y dimension-order routing.
inline std::vector<std::uint32_t> xy_route(const HardwareModel& hw, TileCoord a, TileCoord b) {
  std::vector<std::uint32_t> route;
  TileCoord at = a;
  while (at.x != b.x) {
    const Direction d = b.x > at.x ? kEast : kWest;
    route.push_back(channel_id(hw, at, d));
    at = step(at, d);
  }
  while (at.y != b.y) {
    const Direction d = b.y > at.y ? kNorth : kSouth;
    route.push_back(channel_id(hw, at, d));
    at = step(at, d);
  }
  return route;
}

class MeshSimulator {
public:
  MeshSimulator(const HardwareModel& hw, const SimConfig& cfg)
      : hw_(hw), cfg_(cfg), service_(1.0 / hw.bandwidth), channels_(hw.tile_count() * 4) {}

  void add_spike(double inject_time, std::vector<std::uint32_t> route) {
    const auto id = static_cast<std::uint64_t>(spikes_.size());
    spikes_.push_back({inject_time, 0.0, std::move(route), 0});
    for (auto c : spikes_.back().route) channels_[c].offered++;
    push_event(inject_time, spikes_.back().route.empty() ? 0 : spikes_.back().route.front(), id,
               kInject);
  }

  LatencyReport run() {
    const double stop = cfg_.drain ? std::numeric_limits<double>::infinity() : cfg_.horizon;
    while (!events_.empty()) {
      const Event ev = events_.top();
      if (ev.time > stop) break;
      events_.pop();
      now_ = ev.time;
      if (ev.kind == kInject) {
        inject(ev.spike);
      } else {
        complete(ev.channel);
      }
    }
    return report();
  }

private:
  enum EventKind : std::uint8_t { kDone = 0, kInject = 1 };

  struct Event {
    double time;
    std::uint32_t channel;
    std::uint64_t spike;
    EventKind kind;
    // Min-heap on (time, channel, spike, kind).
    bool operator>(const Event& o) const {
      return std::tie(time, channel, spike, kind) > std::tie(o.time, o.channel, o.spike, o.kind);
    }
  };

  struct Spike {
    double injected;
    double enqueued;
    std::vector<std::uint32_t> route;
    std::size_t hop;  // index of the next channel to traverse
  };

  // Who is waiting for a free slot in a channel's output queue.
  struct Waiter {
    bool from_source;
    std::uint64_t spike;     // when from_source
    std::uint32_t upstream;  // otherwise: channel whose input-buffer head waits
  };

  struct Channel {
    std::deque<std::uint64_t> out_queue;  // front is in service when busy
    std::deque<std::uint64_t> in_buffer;  // at the downstream tile
    std::deque<Waiter> waiters;
    bool busy = false;
    bool stalled = false;
    bool head_waiting = false;
    std::size_t reserved = 0;
    double start = 0.0;
    std::uint64_t offered = 0;
    std::uint64_t served = 0;
    std::uint64_t credit_stalls = 0;
  };

  void push_event(double t, std::uint32_t channel, std::uint64_t spike, EventKind kind) {
    events_.push({t, channel, spike, kind});
  }

  [[nodiscard]] bool has_room(const Channel& c) const { return c.out_queue.size() < hw_.output_buffer; }

  void enqueue(std::uint32_t c, std::uint64_t s) {
    spikes_[s].enqueued = now_;
    channels_[c].out_queue.push_back(s);
    try_start(c);
  }

  void inject(std::uint64_t s) {
    if (spikes_[s].route.empty()) {
      deliver(s);
      return;
    }
    const auto c = spikes_[s].route.front();
    if (has_room(channels_[c]) && channels_[c].waiters.empty()) {
      enqueue(c, s);
    } else {
      channels_[c].waiters.push_back({true, s, 0});
      held_at_source_++;
    }
  }

  void try_start(std::uint32_t c) {
    auto& ch = channels_[c];
    if (ch.busy || ch.out_queue.empty()) return;
    if (ch.in_buffer.size() + ch.reserved >= hw_.input_buffer) {
      if (!ch.stalled) {
        ch.stalled = true;
        ch.credit_stalls++;
      }
      return;
    }
    ch.stalled = false;
    ch.busy = true;
    ch.reserved++;
    ch.start = now_;
    push_event(now_ + service_, c, ch.out_queue.front(), kDone);
  }

  void complete(std::uint32_t c) {
    auto& ch = channels_[c];
    const auto s = ch.out_queue.front();
    ch.out_queue.pop_front();
    ch.busy = false;
    ch.reserved--;
    ch.served++;
    ch.in_buffer.push_back(s);
    if (cfg_.record_trace) trace_.push_back({s, c, spikes_[s].enqueued, ch.start, now_});
    spikes_[s].hop++;
    admit_waiters(c);
    forward(c);
    try_start(c);
  }

  // Moves events from the head of c's input buffer onward until one blocks.
  void forward(std::uint32_t c) {
    auto& ch = channels_[c];
    if (ch.head_waiting) return;
    while (!ch.in_buffer.empty()) {
      const auto s = ch.in_buffer.front();
      auto& sp = spikes_[s];
      if (sp.hop == sp.route.size()) {
        ch.in_buffer.pop_front();
        deliver(s);
        continue;
      }
      const auto next = sp.route[sp.hop];
      auto& nx = channels_[next];
      if (has_room(nx) && nx.waiters.empty()) {
        ch.in_buffer.pop_front();
        enqueue(next, s);
      } else {
        nx.waiters.push_back({false, 0, c});
        ch.head_waiting = true;
        break;
      }
    }
    try_start(c);
  }

  void admit_waiters(std::uint32_t c) {
    auto& ch = channels_[c];
    while (has_room(ch) && !ch.waiters.empty()) {
      const Waiter w = ch.waiters.front();
      ch.waiters.pop_front();
      if (w.from_source) {
        held_at_source_--;
        enqueue(c, w.spike);
      } else {
        auto& up = channels_[w.upstream];
        const auto s = up.in_buffer.front();
        up.in_buffer.pop_front();
        up.head_waiting = false;
        enqueue(c, s);
        forward(w.upstream);
      }
    }
  }

  void deliver(std::uint64_t s) {
    const double latency = now_ - spikes_[s].injected;
    latencies_.push_back(latency);
  }

  LatencyReport report() {
    LatencyReport r;
    r.injected = spikes_.size();
    r.delivered = latencies_.size();
    r.blocked = held_at_source_;
    // Events whose injection lies beyond the stop time never entered the
    // system; with injection inside the horizon this only happens if drain
    // is off and the horizon is reached first.
    std::uint64_t not_yet_injected = 0;
    while (!events_.empty()) {
      if (events_.top().kind == kInject) not_yet_injected++;
      events_.pop();
    }
    r.blocked += not_yet_injected;
    for (const auto& ch : channels_) r.in_flight += ch.out_queue.size() + ch.in_buffer.size();
    double sum = 0.0;
    for (double l : latencies_) {
      sum += l;
      r.max_latency = std::max(r.max_latency, l);
    }
    r.mean_latency = latencies_.empty() ? 0.0 : sum / static_cast<double>(latencies_.size());
    r.end_time = cfg_.drain ? now_ : std::min(now_, cfg_.horizon);
    const double span = std::max(cfg_.horizon, now_);
    for (std::size_t t = 0; t < hw_.tile_count(); ++t) {
      const TileCoord from = hw_.tile_at(t);
      for (std::uint32_t d = 0; d < 4; ++d) {
        const TileCoord to = step(from, static_cast<Direction>(d));
        if (!hw_.contains(to)) continue;
        const auto id = static_cast<std::uint32_t>(t * 4 + d);
        const auto& ch = channels_[id];
        ChannelStats cs{id, from, to, ch.served, 0.0, 0.0, ch.credit_stalls};
        cs.busy_time = static_cast<double>(ch.served) * service_;
        cs.utilization = span > 0.0 ? std::min(1.0, cs.busy_time / span) : 0.0;
        if (static_cast<double>(ch.offered) * service_ > cfg_.horizon) r.overloaded_channels++;
        r.channels.push_back(cs);
      }
    }
    r.latencies = std::move(latencies_);
    r.trace = std::move(trace_);
    return r;
  }

  const HardwareModel& hw_;
  SimConfig cfg_;
  double service_;
  double now_ = 0.0;
  std::vector<Channel> channels_;
  std::vector<Spike> spikes_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::vector<double> latencies_;
  std::vector<HopRecord> trace_;
  std::uint64_t held_at_source_ = 0;
};

}  // namespace detail

/// Injection times of k events on one link over the horizon.
inline std::vector<double> injection_times(SpikeCount k, const SimConfig& cfg, Xoshiro256& rng) {
  std::vector<double> times;
  times.reserve(k);
  const double h = cfg.horizon;
  for (SpikeCount i = 0; i < k; ++i) {
    times.push_back(cfg.injection == InjectionMode::uniform
                        ? static_cast<double>(i) * h / static_cast<double>(k)
                        : rng.unit() * h);
  }
  std::sort(times.begin(), times.end());
  return times;
}

inline LatencyReport simulate(const ClusteredSnn& csnn, const Mapping& mapping,
                              const HardwareModel& hw, const SimConfig& cfg) {
  if (!(cfg.horizon > 0.0)) throw Error("simulation horizon must be > 0");
  hw.validate();
  check_mapping(mapping, csnn.clusters.size(), hw);
  detail::MeshSimulator sim(hw, cfg);
  Xoshiro256 rng(cfg.seed);
  for (const auto& link : csnn.links) {
    const auto route = detail::xy_route(hw, mapping.tile_of[link.src], mapping.tile_of[link.dst]);
    for (double t : injection_times(link.spk, cfg, rng)) sim.add_spike(t, route);
  }
  return sim.run();
}

}  // namespace neuromap
