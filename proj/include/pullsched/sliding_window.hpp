#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "pullsched/buffer_map.hpp"
#include "pullsched/types.hpp"

namespace pullsched {

// Per-node sliding window over the chunk stream. With rate r chunks per tick
// and a window of W ticks, a chunk emitted at tick t is due at tick t + W;
// at tick T the playhead sits at seq (T - W) * r and the exchanging window is
// the whole tail from the playhead to the emission frontier T * r. Chunks the
// playhead moves past while unreceived are reported as expired and never
// requested again.
class SlidingWindow {
 public:
  SlidingWindow(int chunks_per_tick, int window_ticks, Tick start_tick = 0)
      : rate_(chunks_per_tick), window_ticks_(window_ticks), tick_(start_tick) {
    if (chunks_per_tick < 1)
      throw std::invalid_argument("SlidingWindow: chunks_per_tick < 1");
    if (window_ticks < 1)
      throw std::invalid_argument("SlidingWindow: window_ticks < 1");
    base_ = playhead_for(tick_);
    received_.assign(window_len(), false);
  }

  Tick tick() const { return tick_; }
  std::size_t window_len() const {
    return static_cast<std::size_t>(rate_) * static_cast<std::size_t>(window_ticks_);
  }
  ChunkSeq playhead_seq() const { return base_; }
  ChunkSeq exchange_start() const { return base_; }
  ChunkSeq frontier_seq() const {
    return static_cast<ChunkSeq>(tick_) * static_cast<ChunkSeq>(rate_);
  }
  Tick deadline(ChunkSeq seq) const {
    return static_cast<Tick>(seq / static_cast<ChunkSeq>(rate_)) + window_ticks_;
  }

  bool contains(ChunkSeq seq) const {
    return seq >= base_ && seq - base_ < window_len();
  }

  bool received(ChunkSeq seq) const {
    return contains(seq) && received_[static_cast<std::size_t>(seq - base_)];
  }

  // False when the seq is outside the window or already marked.
  bool mark_received(ChunkSeq seq) {
    if (!contains(seq)) return false;
    auto bit = received_[static_cast<std::size_t>(seq - base_)];  // proxy
    if (bit) return false;
    bit = true;
    return true;
  }

  // Moves the playhead to `to_tick` and returns the seqs that expired
  // unreceived on the way.
  std::vector<ChunkSeq> advance(Tick to_tick) {
    if (to_tick < tick_)
      throw std::invalid_argument("SlidingWindow::advance: time moved backwards");
    const ChunkSeq new_base = playhead_for(to_tick);
    std::vector<ChunkSeq> expired;
    for (ChunkSeq s = base_; s < new_base; ++s)
      if (!received_[static_cast<std::size_t>(s - base_)]) expired.push_back(s);
    if (new_base != base_) {
      std::vector<bool> shifted(window_len(), false);
      for (ChunkSeq s = new_base; s - base_ < window_len(); ++s)
        shifted[static_cast<std::size_t>(s - new_base)] =
            received_[static_cast<std::size_t>(s - base_)];
      received_ = std::move(shifted);
      base_ = new_base;
    }
    tick_ = to_tick;
    return expired;
  }

  // Unreceived seqs in [playhead, frontier); `frontier` lets the caller clamp
  // to the end of a finite stream.
  std::vector<ChunkSeq> missing(ChunkSeq frontier) const {
    std::vector<ChunkSeq> out;
    const ChunkSeq hi = std::min<ChunkSeq>(frontier, base_ + window_len());
    for (ChunkSeq s = base_; s < hi; ++s)
      if (!received_[static_cast<std::size_t>(s - base_)]) out.push_back(s);
    return out;
  }
  std::vector<ChunkSeq> missing() const { return missing(frontier_seq()); }

  BufferMap to_buffer_map() const {
    BufferMap bm(base_, window_len());
    for (std::size_t i = 0; i < window_len(); ++i)
      if (received_[i]) bm.set(base_ + i);
    return bm;
  }

 private:
  ChunkSeq playhead_for(Tick t) const {
    const Tick past = t - window_ticks_;
    return past <= 0 ? 0
                     : static_cast<ChunkSeq>(past) * static_cast<ChunkSeq>(rate_);
  }

  int rate_;
  int window_ticks_;
  Tick tick_;
  ChunkSeq base_ = 0;
  std::vector<bool> received_;
};

}  // namespace pullsched
