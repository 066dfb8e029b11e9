#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pullsched/types.hpp"

namespace pullsched {

// Per-neighbor download-bandwidth predictor: a 5-tap adaptive linear filter
// over the delivered-chunk counts of the last 5 request periods, adapted by
// normalized LMS. Cold start seeds the history with the nominal link capacity
// so the first estimates equal the configured class rate, and uniform initial
// weights make the unadapted predictor a 5-period moving average.
class BandwidthEstimator {
 public:
  static constexpr std::size_t kTaps = 5;

  explicit BandwidthEstimator(double step = 0.1) : step_(step) {}

  void register_neighbor(NodeId id, int nominal_chunks_per_tick) {
    if (nominal_chunks_per_tick < 1)
      throw std::invalid_argument("BandwidthEstimator: nominal capacity < 1");
    State s;
    s.history.fill(static_cast<double>(nominal_chunks_per_tick));
    s.weights.fill(1.0 / kTaps);
    neighbors_[id] = s;
  }

  bool known(NodeId id) const { return neighbors_.count(id) != 0; }

  // round(w . h), clamped to at least one chunk per tick.
  int estimate(NodeId id) const {
    const State& s = state(id);
    double dot = 0.0;
    for (std::size_t i = 0; i < kTaps; ++i) dot += s.weights[i] * s.history[i];
    const long r = std::lround(dot);
    return r < 1 ? 1 : static_cast<int>(r);
  }

  // NLMS weight update against the delivered count observed this period,
  // then the observation enters the history (index 0 = oldest).
  void observe(NodeId id, double delivered) {
    State& s = state(id);
    double dot = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < kTaps; ++i) {
      dot += s.weights[i] * s.history[i];
      norm += s.history[i] * s.history[i];
    }
    const double err = delivered - dot;
    for (std::size_t i = 0; i < kTaps; ++i) {
      s.weights[i] += step_ * err * s.history[i] / (1e-9 + norm);
      s.weights[i] = std::clamp(s.weights[i], 0.0, 1.0);
    }
    for (std::size_t i = 0; i + 1 < kTaps; ++i) s.history[i] = s.history[i + 1];
    s.history[kTaps - 1] = delivered;
  }

 private:
  struct State {
    std::array<double, kTaps> history{};
    std::array<double, kTaps> weights{};
  };

  const State& state(NodeId id) const {
    auto it = neighbors_.find(id);
    if (it == neighbors_.end())
      throw std::invalid_argument("BandwidthEstimator: unknown neighbor");
    return it->second;
  }
  State& state(NodeId id) {
    return const_cast<State&>(static_cast<const BandwidthEstimator*>(this)->state(id));
  }

  double step_;
  std::map<NodeId, State> neighbors_;
};

}  // namespace pullsched
