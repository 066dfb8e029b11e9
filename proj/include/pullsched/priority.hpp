#pragma once

#include <cmath>
#include <stdexcept>

#include "pullsched/types.hpp"

namespace pullsched {

// Identity of one stream chunk. `deadline` is the tick (request period) at
// which the chunk is played; `size` is in bandwidth units, 1 for equal-size
// chunks.
struct ChunkMeta {
  ChunkSeq seq = 0;
  int layer = 1;
  Tick deadline = 0;
  int size = 1;
};

struct PriorityParams {
  int max_layer = 1;
  double theta = 0.0;
  double ep_base = 10.0;
  double lp_base = 10.0;
  int min_exponent = -30;  // exponent floor, keeps far-future chunks above 0

  void validate() const {
    if (max_layer < 1) throw std::invalid_argument("PriorityParams: max_layer < 1");
    if (theta < 0.0) throw std::invalid_argument("PriorityParams: theta < 0");
    if (!(ep_base > 1.0)) throw std::invalid_argument("PriorityParams: ep_base <= 1");
    if (!(lp_base > 1.0)) throw std::invalid_argument("PriorityParams: lp_base <= 1");
    if (min_exponent > 0) throw std::invalid_argument("PriorityParams: min_exponent > 0");
  }
};

// Urgency component: delta = now - deadline, never positive for a requestable
// chunk. Grows toward 1 as the deadline approaches.
inline double emergency_priority(Tick delta, const PriorityParams& p) {
  if (delta > 0)
    throw std::invalid_argument(
        "emergency_priority: chunk past deadline reached priority computation");
  const Tick e = delta < p.min_exponent ? p.min_exponent : delta;
  return std::pow(p.ep_base, static_cast<double>(e));
}

// Layer component: base layer gets the largest boost, top layer gets 1.
inline double layer_priority(int layer, const PriorityParams& p) {
  if (layer < 1 || layer > p.max_layer)
    throw std::invalid_argument("layer_priority: layer out of range");
  return std::pow(p.lp_base, static_cast<double>(p.max_layer - layer));
}

// Combined request priority. Single-layer streams use theta = 0, which drops
// the layer term.
inline double chunk_priority(const ChunkMeta& chunk, Tick now,
                             const PriorityParams& p) {
  const double ep = emergency_priority(now - chunk.deadline, p);
  if (p.theta == 0.0) return ep;
  return ep + p.theta * layer_priority(chunk.layer, p);
}

// Default weighting from the evaluation setup: lp_base^-max_layer.
inline double default_theta(const PriorityParams& p) {
  return std::pow(p.lp_base, static_cast<double>(-p.max_layer));
}

// Smallest convenient theta that makes layer order dominate deadline order:
// the urgency spread inside any window is < 1, while adjacent layer
// priorities differ by at least lp_base - 1, so theta = 1/(lp_base - 1)
// guarantees every layer-l chunk outranks every layer-(l+1) chunk.
inline double conservative_theta(const PriorityParams& p) {
  return 1.0 / (p.lp_base - 1.0);
}

}  // namespace pullsched
