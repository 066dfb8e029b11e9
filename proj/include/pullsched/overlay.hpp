#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pullsched/rng.hpp"
#include "pullsched/types.hpp"

namespace pullsched {

// Random mesh of `node_count` receivers plus one source. The source sits at
// index node_count and is adjacent to `degree` randomly chosen receivers.
// adjacency has node_count + 1 entries, each sorted ascending (which places
// the source, when present, at the end of a receiver's list).
struct OverlayGraph {
  std::size_t node_count = 0;
  int degree = 0;
  std::vector<std::vector<NodeId>> adjacency;
  std::vector<std::size_t> bandwidth_class;  // per receiver
  bool exact_regular = true;

  NodeId source() const { return static_cast<NodeId>(node_count); }
};

namespace detail {

inline bool try_pairing_model(std::size_t n, int degree, Rng& rng,
                              std::vector<std::set<NodeId>>& adj) {
  std::vector<NodeId> stubs;
  stubs.reserve(n * static_cast<std::size_t>(degree));
  for (std::size_t v = 0; v < n; ++v)
    for (int i = 0; i < degree; ++i) stubs.push_back(static_cast<NodeId>(v));
  rng.shuffle(stubs);
  std::vector<std::set<NodeId>> out(n);
  for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
    const NodeId a = stubs[i];
    const NodeId b = stubs[i + 1];
    if (a == b || out[a].count(b)) return false;  // self-loop or multi-edge
    out[a].insert(b);
    out[b].insert(a);
  }
  adj = std::move(out);
  return true;
}

// Deficiency repair: connect the two highest-need non-adjacent nodes until
// stuck. May leave isolated deficiencies of one slot.
inline void greedy_fill(std::size_t n, int degree,
                        std::vector<std::set<NodeId>>& adj) {
  while (true) {
    std::vector<std::size_t> needy;
    for (std::size_t v = 0; v < n; ++v)
      if (adj[v].size() < static_cast<std::size_t>(degree)) needy.push_back(v);
    if (needy.size() < 2) return;
    std::sort(needy.begin(), needy.end(), [&](std::size_t a, std::size_t b) {
      const std::size_t na = static_cast<std::size_t>(degree) - adj[a].size();
      const std::size_t nb = static_cast<std::size_t>(degree) - adj[b].size();
      if (na != nb) return na > nb;
      return a < b;
    });
    bool linked = false;
    for (std::size_t i = 0; i < needy.size() && !linked; ++i)
      for (std::size_t j = i + 1; j < needy.size() && !linked; ++j)
        if (!adj[needy[i]].count(static_cast<NodeId>(needy[j]))) {
          adj[needy[i]].insert(static_cast<NodeId>(needy[j]));
          adj[needy[j]].insert(static_cast<NodeId>(needy[i]));
          linked = true;
        }
    if (!linked) return;
  }
}

// Largest-remainder apportionment of class quotas over n receivers.
inline std::vector<std::size_t> class_quotas(std::span<const double> fractions,
                                             std::size_t n) {
  std::vector<std::size_t> quota(fractions.size(), 0);
  std::vector<double> remainder(fractions.size(), 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    const double exact = fractions[i] * static_cast<double>(n);
    quota[i] = static_cast<std::size_t>(exact);
    remainder[i] = exact - static_cast<double>(quota[i]);
    assigned += quota[i];
  }
  std::vector<std::size_t> by_rem(fractions.size());
  for (std::size_t i = 0; i < by_rem.size(); ++i) by_rem[i] = i;
  std::sort(by_rem.begin(), by_rem.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return a < b;
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++quota[by_rem[i % by_rem.size()]];
  return quota;
}

}  // namespace detail

inline OverlayGraph generate_overlay(std::size_t node_count, int degree,
                                     std::span<const double> class_fractions,
                                     Rng& rng) {
  if (node_count < 2) throw std::invalid_argument("overlay: need at least 2 nodes");
  if (degree < 1 || static_cast<std::size_t>(degree) >= node_count)
    throw std::invalid_argument("overlay: degree must be in [1, node_count)");
  if (class_fractions.empty())
    throw std::invalid_argument("overlay: need at least one bandwidth class");

  std::vector<std::set<NodeId>> adj(node_count);
  bool exact = true;
  if (static_cast<std::size_t>(degree) == node_count - 1) {
    for (std::size_t v = 0; v < node_count; ++v)
      for (std::size_t w = 0; w < node_count; ++w)
        if (v != w) adj[v].insert(static_cast<NodeId>(w));
  } else {
    bool ok = false;
    for (int attempt = 0; attempt < 200 && !ok; ++attempt)
      ok = detail::try_pairing_model(node_count, degree, rng, adj);
    if (!ok || (node_count * static_cast<std::size_t>(degree)) % 2 != 0) {
      detail::greedy_fill(node_count, degree, adj);
      exact = true;
      for (std::size_t v = 0; v < node_count; ++v)
        if (adj[v].size() != static_cast<std::size_t>(degree)) exact = false;
    }
  }

  OverlayGraph g;
  g.node_count = node_count;
  g.degree = degree;
  g.exact_regular = exact;
  g.adjacency.assign(node_count + 1, {});
  for (std::size_t v = 0; v < node_count; ++v)
    g.adjacency[v].assign(adj[v].begin(), adj[v].end());

  // Source attachment: `degree` distinct random receivers.
  std::vector<NodeId> receivers(node_count);
  for (std::size_t v = 0; v < node_count; ++v) receivers[v] = static_cast<NodeId>(v);
  rng.shuffle(receivers);
  const std::size_t feeds = std::min<std::size_t>(degree, node_count);
  for (std::size_t i = 0; i < feeds; ++i) {
    const NodeId v = receivers[i];
    g.adjacency[v].push_back(g.source());
    g.adjacency[node_count].push_back(v);
  }
  for (auto& list : g.adjacency) std::sort(list.begin(), list.end());

  // Bandwidth classes: quota per class, then a random permutation.
  const auto quota = detail::class_quotas(class_fractions, node_count);
  std::vector<std::size_t> labels;
  labels.reserve(node_count);
  for (std::size_t cls = 0; cls < quota.size(); ++cls)
    for (std::size_t i = 0; i < quota[cls]; ++i) labels.push_back(cls);
  rng.shuffle(labels);
  g.bandwidth_class = std::move(labels);
  return g;
}

}  // namespace pullsched
