#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pullsched/bandwidth.hpp"
#include "pullsched/buffer_map.hpp"
#include "pullsched/config.hpp"
#include "pullsched/metrics.hpp"
#include "pullsched/overlay.hpp"
#include "pullsched/pending.hpp"
#include "pullsched/priority.hpp"
#include "pullsched/rng.hpp"
#include "pullsched/scheduler.hpp"
#include "pullsched/sliding_window.hpp"
#include "pullsched/types.hpp"

namespace pullsched {

inline constexpr int kReliabilityPeriods = 5;

// Per-link bookkeeping: the reliability window (promised vs delivered over
// the last kReliabilityPeriods periods that carried requests) and the
// scratch counters of the current tick.
struct LinkStats {
  std::array<int, kReliabilityPeriods> promised{};
  std::array<int, kReliabilityPeriods> delivered{};
  int head = 0;
  int filled = 0;
  int last_prediction = 1;
  int tick_promised = 0;
  int tick_delivered = 0;

  void push(int p, int d) {
    promised[static_cast<std::size_t>(head)] = p;
    delivered[static_cast<std::size_t>(head)] = d;
    head = (head + 1) % kReliabilityPeriods;
    filled = std::min(filled + 1, kReliabilityPeriods);
  }
  double reliability() const {
    int p = 0;
    int d = 0;
    for (int i = 0; i < filled; ++i) {
      p += promised[static_cast<std::size_t>(i)];
      d += delivered[static_cast<std::size_t>(i)];
    }
    if (p == 0) return 1.0;
    return static_cast<double>(d) / static_cast<double>(p);
  }
};

struct NodeRuntime {
  SlidingWindow window;
  BandwidthEstimator estimator;
  PendingRequests pending;
  Rng rng;
  std::vector<NodeId> neighbors;
  std::map<NodeId, LinkStats> links;
  int download_capacity = 1;
  int upload_capacity = 1;
  int playable = 0;
  std::vector<char> on_time;  // per measured chunk
  std::uint64_t requested = 0;
  std::uint64_t duplicates = 0;
  int tick_received = 0;

  NodeRuntime(int chunks_per_tick, int window_ticks, Rng node_rng)
      : window(chunks_per_tick, window_ticks), rng(node_rng) {}
};

// Deterministic discrete-time world. One tick = one request period:
// snapshot buffer maps (state at the end of the previous tick), schedule
// every node from the snapshots, truncate to download capacity, resolve
// transfers uploader-side in priority order, then update estimators,
// reliability windows and sliding windows.
class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
    cfg_.validate();
    params_ = cfg_.priority;
    params_.max_layer = cfg_.stream.layers;

    std::vector<double> fractions;
    for (const BandwidthClass& c : cfg_.bandwidth_classes)
      fractions.push_back(c.fraction);
    Rng overlay_rng = rng_.fork(0);
    overlay_ = generate_overlay(cfg_.node_count, cfg_.degree, fractions, overlay_rng);

    rate_ = cfg_.stream.chunks_per_tick();
    window_ticks_ = cfg_.window_ticks();
    emission_end_ = window_ticks_ + cfg_.duration_ticks;
    total_ticks_ = emission_end_ + window_ticks_;
    for (int l = 1; l <= cfg_.stream.layers; ++l)
      for (int i = 0; i < cfg_.stream.layer_chunks_per_tick(l); ++i)
        layer_of_offset_.push_back(l);

    const std::size_t measured =
        static_cast<std::size_t>(cfg_.duration_ticks) * static_cast<std::size_t>(rate_);
    nodes_.reserve(cfg_.node_count);
    for (std::size_t i = 0; i < cfg_.node_count; ++i) {
      NodeRuntime node(rate_, window_ticks_, rng_.fork(i + 1));
      const std::size_t cls = overlay_.bandwidth_class[i];
      node.download_capacity = cfg_.download_chunks(cls);
      node.upload_capacity = cfg_.upload_chunks(cls);
      node.playable = playable_layers(cfg_.bandwidth_classes[cls].download_kbps);
      node.neighbors = overlay_.adjacency[i];
      for (NodeId k : node.neighbors) {
        const int peer_upload =
            k == overlay_.source()
                ? cfg_.source_upload_chunks()
                : cfg_.upload_chunks(overlay_.bandwidth_class[k]);
        node.estimator.register_neighbor(
            k, std::max(1, std::min(peer_upload, node.download_capacity)));
        node.links[k] = LinkStats{};
      }
      node.on_time.assign(measured, 0);
      nodes_.push_back(std::move(node));
    }
    last_decisions_.resize(cfg_.node_count);
  }

  Tick now() const { return tick_; }
  Tick total_ticks() const { return total_ticks_; }
  const OverlayGraph& overlay() const { return overlay_; }
  const NodeRuntime& node(std::size_t i) const { return nodes_.at(i); }
  const ScheduleDecision& last_decision(std::size_t i) const {
    return last_decisions_.at(i);
  }

  void step() {
    if (tick_ >= total_ticks_)
      throw std::logic_error("sim: stepped past the end of the run");
    const Tick t = tick_;
    const ChunkSeq frontier =
        static_cast<ChunkSeq>(std::min(t, emission_end_)) *
        static_cast<ChunkSeq>(rate_);

    // The source holds every chunk emitted so far.
    BufferMap source_map(0, frontier);
    for (ChunkSeq s = 0; s < frontier; ++s) source_map.set(s);

    // Per-period upload budgets; requests are granted against them.
    std::vector<int> upload_left(nodes_.size() + 1);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      upload_left[i] = nodes_[i].upload_capacity;
    upload_left[nodes_.size()] = cfg_.source_upload_chunks();

    // One request period is long next to a chunk transfer, so peers act in
    // sequence — announcements read live, grants immediate — in a fresh
    // seeded order each period standing in for their unsynchronized timers.
    std::vector<std::size_t> turn(nodes_.size());
    std::iota(turn.begin(), turn.end(), std::size_t{0});
    Rng turn_rng = rng_.fork((1ull << 32) + static_cast<std::uint64_t>(t));
    turn_rng.shuffle(turn);

    for (std::size_t i : turn) {
      NodeRuntime& node = nodes_[i];
      node.tick_received = 0;
      node.pending.refresh(t);

      std::vector<ChunkMeta> missing;
      for (ChunkSeq seq : node.window.missing(frontier))
        if (!node.pending.pending_to(seq)) missing.push_back(meta_of(seq));

      std::vector<NeighborView> views;
      views.reserve(node.neighbors.size());
      for (NodeId k : node.neighbors) {
        NeighborView v;
        v.neighbor_id = k;
        v.buffer_map = k == overlay_.source() ? source_map
                                              : nodes_[k].window.to_buffer_map();
        const int prediction = node.estimator.estimate(k);
        node.links[k].last_prediction = prediction;
        v.est_download = std::max(
            0, std::min({prediction + 1, node.download_capacity, upload_left[k]}));
        v.reliability = node.links[k].reliability();
        views.push_back(std::move(v));
      }

      ScheduleDecision d = missing.empty()
                               ? ScheduleDecision{}
                               : dispatch(node, missing, views, t);
      validate_decision(d, missing, views);

      // Receiver-side truncation: keep the download_capacity highest-priority
      // requests, drop the rest back to "unassigned" (they stay missing).
      struct Wanted {
        double priority;
        NodeId uploader;
        ChunkSeq seq;
      };
      std::vector<Wanted> wanted;
      for (const auto& [seq, nbr] : d.requests)
        wanted.push_back({priority_of(seq, t), nbr, seq});
      std::sort(wanted.begin(), wanted.end(), [](const Wanted& a, const Wanted& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.seq < b.seq;
      });
      if (wanted.size() > static_cast<std::size_t>(node.download_capacity)) {
        for (std::size_t j = static_cast<std::size_t>(node.download_capacity);
             j < wanted.size(); ++j) {
          d.requests.erase(wanted[j].seq);
          d.unassigned.insert(wanted[j].seq);
        }
        wanted.resize(static_cast<std::size_t>(node.download_capacity));
      }
      for (const Wanted& e : wanted) {
        if (node.pending.pending_to(e.seq)) {
          ++node.duplicates;
          continue;
        }
        node.pending.issue(e.seq, e.uploader, t, deadline_of(e.seq));
        ++node.requested;
        ++node.links[e.uploader].tick_promised;
        if (upload_left[e.uploader] <= 0)
          throw std::logic_error("sim: uploader granted past its capacity");
        --upload_left[e.uploader];
        deliver(e.uploader, static_cast<NodeId>(i), e.seq);
      }
      last_decisions_[i] = std::move(d);

      for (auto& [k, link] : node.links) {
        if (link.tick_promised > 0) {
          int observed = link.tick_delivered;
          if (link.tick_delivered >= link.tick_promised)
            observed = std::max(observed, link.last_prediction);
          node.estimator.observe(k, observed);
          link.push(link.tick_promised, link.tick_delivered);
        }
        link.tick_promised = 0;
        link.tick_delivered = 0;
      }
    }

    for (NodeRuntime& node : nodes_) node.window.advance(t + 1);
    ++tick_;
  }

  MetricsReport run() {
    while (tick_ < total_ticks_) step();

    MetricsInput in;
    in.layers = cfg_.stream.layers;
    in.chunks_per_tick = rate_;
    in.layer_of_offset = layer_of_offset_;
    in.measure_start = window_ticks_;
    in.measure_end = emission_end_;
    for (const NodeRuntime& node : nodes_) {
      in.playable_layers.push_back(node.playable);
      in.on_time.push_back(node.on_time);
    }

    MetricsReport r;
    r.strategy = to_string(cfg_.strategy);
    r.seed = cfg_.seed;
    r.layers = cfg_.stream.layers;
    r.stream_rate_kbps = cfg_.stream.total_rate_kbps();
    r.window_s = cfg_.window_seconds;
    if (cfg_.duration_ticks > 0) {
      if (cfg_.stream.layers == 1) {
        r.per_layer = {single_layer_delivery_ratio(in)};
        r.aggregate = r.per_layer[0];
      } else {
        for (int l = 1; l <= cfg_.stream.layers; ++l)
          r.per_layer.push_back(layered_delivery_ratio(in, l));
        r.aggregate = aggregate_delivery(in);
      }
    }
    for (const NodeRuntime& node : nodes_) {
      r.requested_count += node.requested;
      r.duplicate_request_count += node.duplicates;
      for (char got : node.on_time)
        if (!got) ++r.expired_count;
    }
    r.chunks_emitted_measured = static_cast<std::uint64_t>(cfg_.duration_ticks) *
                                static_cast<std::uint64_t>(rate_);
    r.config_hash = config_hash(cfg_);
    r.ticks_simulated = total_ticks_;
    r.node_count = cfg_.node_count;
    r.overlay_regular = overlay_.exact_regular;
    return r;
  }

 private:
  int playable_layers(int download_kbps) const {
    int playable = 0;
    int cumulative = 0;
    for (int l = 1; l <= cfg_.stream.layers; ++l) {
      cumulative += cfg_.stream.layer_rate_kbps[static_cast<std::size_t>(l - 1)];
      if (download_kbps < cumulative) break;
      playable = l;
    }
    return playable;
  }

  ChunkMeta meta_of(ChunkSeq seq) const {
    ChunkMeta m;
    m.seq = seq;
    m.layer = layer_of_offset_[static_cast<std::size_t>(seq % static_cast<ChunkSeq>(rate_))];
    m.deadline = deadline_of(seq);
    m.size = 1;
    return m;
  }

  Tick deadline_of(ChunkSeq seq) const {
    return static_cast<Tick>(seq / static_cast<ChunkSeq>(rate_)) + window_ticks_;
  }

  double priority_of(ChunkSeq seq, Tick now) const {
    return chunk_priority(meta_of(seq), now, params_);
  }

  ScheduleDecision dispatch(NodeRuntime& node, std::span<const ChunkMeta> missing,
                            std::span<const NeighborView> views, Tick t) {
    switch (cfg_.strategy) {
      case Strategy::kAssched:
        return assched(missing, views, t, params_);
      case Strategy::kNassched:
        return nassched(missing, views, t, params_);
      case Strategy::kRandom:
        return baseline_schedule(BaselineKind::kRandom, missing, views, t, params_, node.rng);
      case Strategy::kRarestFirst:
        return baseline_schedule(BaselineKind::kRarestFirst, missing, views, t, params_, node.rng);
      case Strategy::kRoundRobin:
        return baseline_schedule(BaselineKind::kRoundRobin, missing, views, t, params_, node.rng);
    }
    throw std::logic_error("sim: bad strategy enum");
  }

  void deliver(NodeId uploader, NodeId requester, ChunkSeq seq) {
    NodeRuntime& rcv = nodes_[requester];
    if (!rcv.window.mark_received(seq))
      throw std::logic_error("sim: duplicate or out-of-window delivery");
    if (!rcv.pending.fulfill(seq))
      throw std::logic_error("sim: delivery without a pending request");
    if (++rcv.tick_received > rcv.download_capacity)
      throw std::logic_error("sim: receiver over download capacity");
    ++rcv.links[uploader].tick_delivered;
    const Tick emit = static_cast<Tick>(seq / static_cast<ChunkSeq>(rate_));
    if (emit >= window_ticks_ && emit < emission_end_) {
      const std::size_t idx =
          static_cast<std::size_t>(emit - window_ticks_) * static_cast<std::size_t>(rate_) +
          static_cast<std::size_t>(seq % static_cast<ChunkSeq>(rate_));
      rcv.on_time[idx] = 1;
    }
  }

  SimConfig cfg_;
  Rng rng_;
  PriorityParams params_;
  OverlayGraph overlay_;
  std::vector<NodeRuntime> nodes_;
  std::vector<ScheduleDecision> last_decisions_;
  std::vector<int> layer_of_offset_;
  int rate_ = 1;
  int window_ticks_ = 1;
  Tick emission_end_ = 0;
  Tick total_ticks_ = 0;
  Tick tick_ = 0;
};

inline MetricsReport run_simulation(const SimConfig& cfg) {
  Simulation sim(cfg);
  return sim.run();
}

}  // namespace pullsched
