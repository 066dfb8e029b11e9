#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pullsched/brute_force.hpp"
#include "pullsched/buffer_map.hpp"
#include "pullsched/hungarian.hpp"
#include "pullsched/knapsack.hpp"
#include "pullsched/matrix.hpp"
#include "pullsched/priority.hpp"
#include "pullsched/rng.hpp"
#include "pullsched/types.hpp"

namespace pullsched {

// Snapshot of one neighbor as seen by the scheduling node. est_download is
// the link capacity granted to us in chunks per tick; reliability orders rows
// for the line-processing heuristic.
struct NeighborView {
  NodeId neighbor_id = 0;
  BufferMap buffer_map;
  int est_download = 1;
  double reliability = 1.0;
};

// Realized requests of one request period: chunk -> chosen neighbor, plus the
// chunks left unrequested. objective is the priority sum of the requests.
struct ScheduleDecision {
  std::map<ChunkSeq, NodeId> requests;
  std::set<ChunkSeq> unassigned;
  double objective = 0.0;
};

enum class Strategy { kAssched, kNassched, kRandom, kRarestFirst, kRoundRobin };

inline Strategy parse_strategy(const std::string& name) {
  if (name == "assched") return Strategy::kAssched;
  if (name == "nassched") return Strategy::kNassched;
  if (name == "rnd") return Strategy::kRandom;
  if (name == "lrf") return Strategy::kRarestFirst;
  if (name == "rr") return Strategy::kRoundRobin;
  throw std::invalid_argument("unknown strategy: " + name);
}

inline std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kAssched: return "assched";
    case Strategy::kNassched: return "nassched";
    case Strategy::kRandom: return "rnd";
    case Strategy::kRarestFirst: return "lrf";
    case Strategy::kRoundRobin: return "rr";
  }
  throw std::logic_error("bad strategy enum");
}

// Row order of the assignment matrix: reliability descending, neighbor id
// ascending on ties.
inline std::vector<std::size_t> scheduling_order(
    std::span<const NeighborView> neighbors) {
  std::vector<std::size_t> order(neighbors.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (neighbors[a].reliability != neighbors[b].reliability)
      return neighbors[a].reliability > neighbors[b].reliability;
    return neighbors[a].neighbor_id < neighbors[b].neighbor_id;
  });
  return order;
}

inline std::vector<ChunkMeta> sorted_by_seq(std::span<const ChunkMeta> missing) {
  std::vector<ChunkMeta> out(missing.begin(), missing.end());
  std::sort(out.begin(), out.end(),
            [](const ChunkMeta& a, const ChunkMeta& b) { return a.seq < b.seq; });
  return out;
}

// Availability-masked priority matrix: row k = k-th neighbor in scheduling
// order, column j = j-th missing chunk in seq order. Cells where the neighbor
// does not hold the chunk are forbidden.
inline WeightMatrix build_matrix(std::span<const ChunkMeta> missing,
                                 std::span<const NeighborView> neighbors,
                                 Tick now, const PriorityParams& params) {
  const auto chunks = sorted_by_seq(missing);
  const auto order = scheduling_order(neighbors);
  WeightMatrix m(neighbors.size(), chunks.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const NeighborView& nb = neighbors[order[r]];
    for (std::size_t c = 0; c < chunks.size(); ++c)
      if (nb.buffer_map.has(chunks[c].seq))
        m.set(r, c, chunk_priority(chunks[c], now, params));
  }
  return m;
}

namespace detail {

inline void finish_decision(ScheduleDecision& d,
                            std::span<const ChunkMeta> chunks) {
  for (const ChunkMeta& c : chunks)
    if (!d.requests.count(c.seq)) d.unassigned.insert(c.seq);
}

}  // namespace detail

// Line-processing heuristic for the one-to-many problem: walk neighbors in
// reliability order, solve a 0/1 knapsack per row (values = priorities,
// weights = chunk sizes, capacity = granted bandwidth), and mask selected
// chunks for all later rows. The knapsack routine is pluggable; the default
// is the exact dynamic program.
inline ScheduleDecision assched(std::span<const ChunkMeta> missing,
                                std::span<const NeighborView> neighbors,
                                Tick now, const PriorityParams& params,
                                const KnapsackFn& knapsack = {}) {
  const auto chunks = sorted_by_seq(missing);
  const auto order = scheduling_order(neighbors);
  ScheduleDecision d;
  std::vector<char> masked(chunks.size(), 0);

  for (std::size_t r = 0; r < order.size(); ++r) {
    const NeighborView& nb = neighbors[order[r]];
    if (nb.est_download < 1) continue;
    std::vector<double> values;
    std::vector<int> weights;
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      if (masked[c] || !nb.buffer_map.has(chunks[c].seq)) continue;
      values.push_back(chunk_priority(chunks[c], now, params));
      weights.push_back(chunks[c].size);
      cols.push_back(c);
    }
    if (values.empty()) continue;
    const KnapsackResult picked =
        knapsack ? knapsack(values, weights, nb.est_download)
                 : knapsack_max(values, weights, nb.est_download);
    for (std::size_t idx : picked.selected) {
      const std::size_t c = cols[idx];
      masked[c] = 1;
      d.requests[chunks[c].seq] = nb.neighbor_id;
      d.objective += values[idx];
    }
  }
  detail::finish_decision(d, chunks);
  return d;
}

// Optimal scheduler for equal-size chunks. Each neighbor is expanded into one
// unit-capacity row per granted chunk, the matrix is squared with
// constant-weight padding (virtual rows when chunks outnumber rows, dummy
// columns in the opposite case), and a maximization Hungarian solve yields
// the assignment. Matches through padding or forbidden cells become
// "unassigned".
//
// Rows beyond a neighbor's held-chunk count and columns nobody holds cannot
// carry a real assignment, so they are dropped before squaring; this keeps
// the matrix small without changing the optimum.
inline ScheduleDecision nassched(std::span<const ChunkMeta> missing,
                                 std::span<const NeighborView> neighbors,
                                 Tick now, const PriorityParams& params,
                                 double virtual_weight = 1.0) {
  const auto chunks = sorted_by_seq(missing);
  for (const ChunkMeta& c : chunks)
    if (c.size != 1)
      throw std::invalid_argument("nassched: requires unit-size chunks");
  const auto order = scheduling_order(neighbors);
  ScheduleDecision d;

  // Columns with at least one holder, in seq order.
  std::vector<std::size_t> kept;
  std::vector<double> prio(chunks.size(), 0.0);
  for (std::size_t c = 0; c < chunks.size(); ++c) {
    bool held = false;
    for (const NeighborView& nb : neighbors)
      if (nb.est_download >= 1 && nb.buffer_map.has(chunks[c].seq)) {
        held = true;
        break;
      }
    if (held) {
      prio[c] = chunk_priority(chunks[c], now, params);
      kept.push_back(c);
    }
  }
  if (kept.empty()) {
    detail::finish_decision(d, chunks);
    return d;
  }

  // Expanded rows: min(granted bandwidth, held count) per neighbor.
  std::vector<std::size_t> row_owner;  // index into `neighbors`
  for (std::size_t k : order) {
    const NeighborView& nb = neighbors[k];
    if (nb.est_download < 1) continue;
    std::size_t holds = 0;
    for (std::size_t c : kept)
      if (nb.buffer_map.has(chunks[c].seq)) ++holds;
    const std::size_t b = std::min<std::size_t>(
        static_cast<std::size_t>(nb.est_download), holds);
    for (std::size_t i = 0; i < b; ++i) row_owner.push_back(k);
  }
  const std::size_t m = row_owner.size();

  // With only m rows, at most m chunks are ever assigned, and a neighbor is
  // never pushed below its m best held chunks: if it were assigned a worse
  // one, its m best would all be taken (impossible — that needs m+1
  // assignments) or one would be free to swap to without losing value. So
  // restricting each neighbor to its top-m held columns (priority desc, seq
  // asc) keeps an optimal solution while shrinking the matrix.
  if (kept.size() > m) {
    std::vector<char> marked(chunks.size(), 0);
    for (const NeighborView& nb : neighbors) {
      if (nb.est_download < 1) continue;
      std::vector<std::size_t> held;
      for (std::size_t c : kept)
        if (nb.buffer_map.has(chunks[c].seq)) held.push_back(c);
      if (held.size() > m) {
        std::sort(held.begin(), held.end(), [&](std::size_t a, std::size_t b) {
          if (prio[a] != prio[b]) return prio[a] > prio[b];
          return chunks[a].seq < chunks[b].seq;
        });
        held.resize(m);
      }
      for (std::size_t c : held) marked[c] = 1;
    }
    std::vector<std::size_t> pruned;
    for (std::size_t c : kept)
      if (marked[c]) pruned.push_back(c);
    kept = std::move(pruned);
  }
  const std::size_t l = kept.size();
  const std::size_t n = std::max(m, l);

  WeightMatrix square(n, n);
  for (std::size_t r = 0; r < m; ++r) {
    const NeighborView& nb = neighbors[row_owner[r]];
    for (std::size_t j = 0; j < l; ++j)
      if (nb.buffer_map.has(chunks[kept[j]].seq))
        square.set(r, j, prio[kept[j]]);
  }
  for (std::size_t r = m; r < n; ++r)  // virtual rows (l > m)
    for (std::size_t j = 0; j < n; ++j) square.set(r, j, virtual_weight);
  for (std::size_t j = l; j < n; ++j)  // dummy columns (m > l)
    for (std::size_t r = 0; r < m; ++r) square.set(r, j, virtual_weight);

  const Matching match = hungarian_max(square);
  for (std::size_t r = 0; r < m; ++r) {
    const auto j = static_cast<std::size_t>(match.row_to_col[r]);
    if (j >= l || square.is_forbidden(r, j)) continue;
    d.requests[chunks[kept[j]].seq] = neighbors[row_owner[r]].neighbor_id;
    d.objective += prio[kept[j]];
  }
  detail::finish_decision(d, chunks);
  return d;
}

enum class BaselineKind { kRandom, kRarestFirst, kRoundRobin };

// The three comparison strategies. All respect availability and residual
// capacity; they differ only in chunk order and holder choice:
//   RND - chunks in random order, uniform pick among feasible holders.
//   LRF - chunks by ascending holder count (tie: deadline, seq), served by
//         the holder with most residual capacity (tie: lower id).
//   RR  - chunks by ascending seq, holders taken from a rotating cursor over
//         the neighbor list order.
inline ScheduleDecision baseline_schedule(BaselineKind kind,
                                          std::span<const ChunkMeta> missing,
                                          std::span<const NeighborView> neighbors,
                                          Tick now, const PriorityParams& params,
                                          Rng& rng) {
  const auto chunks = sorted_by_seq(missing);
  ScheduleDecision d;
  std::vector<int> residual(neighbors.size());
  for (std::size_t k = 0; k < neighbors.size(); ++k)
    residual[k] = std::max(0, neighbors[k].est_download);

  auto assign = [&](std::size_t c, std::size_t k) {
    residual[k] -= chunks[c].size;
    d.requests[chunks[c].seq] = neighbors[k].neighbor_id;
    d.objective += chunk_priority(chunks[c], now, params);
  };

  switch (kind) {
    case BaselineKind::kRandom: {
      std::vector<std::size_t> chunk_order(chunks.size());
      for (std::size_t i = 0; i < chunk_order.size(); ++i) chunk_order[i] = i;
      rng.shuffle(chunk_order);
      for (std::size_t c : chunk_order) {
        std::vector<std::size_t> holders;
        for (std::size_t k = 0; k < neighbors.size(); ++k)
          if (neighbors[k].buffer_map.has(chunks[c].seq) &&
              residual[k] >= chunks[c].size)
            holders.push_back(k);
        if (holders.empty()) continue;
        assign(c, holders[static_cast<std::size_t>(rng.bounded(holders.size()))]);
      }
      break;
    }
    case BaselineKind::kRarestFirst: {
      std::vector<std::size_t> chunk_order(chunks.size());
      for (std::size_t i = 0; i < chunk_order.size(); ++i) chunk_order[i] = i;
      std::vector<int> holder_count(chunks.size(), 0);
      for (std::size_t c = 0; c < chunks.size(); ++c)
        for (const NeighborView& nb : neighbors)
          if (nb.buffer_map.has(chunks[c].seq)) ++holder_count[c];
      std::sort(chunk_order.begin(), chunk_order.end(),
                [&](std::size_t a, std::size_t b) {
                  if (holder_count[a] != holder_count[b])
                    return holder_count[a] < holder_count[b];
                  if (chunks[a].deadline != chunks[b].deadline)
                    return chunks[a].deadline < chunks[b].deadline;
                  return chunks[a].seq < chunks[b].seq;
                });
      for (std::size_t c : chunk_order) {
        std::size_t best = neighbors.size();
        for (std::size_t k = 0; k < neighbors.size(); ++k) {
          if (!neighbors[k].buffer_map.has(chunks[c].seq)) continue;
          if (best == neighbors.size() || residual[k] > residual[best] ||
              (residual[k] == residual[best] &&
               neighbors[k].neighbor_id < neighbors[best].neighbor_id))
            best = k;
        }
        if (best == neighbors.size() || residual[best] < chunks[c].size) continue;
        assign(c, best);
      }
      break;
    }
    case BaselineKind::kRoundRobin: {
      std::size_t cursor = 0;
      for (std::size_t c = 0; c < chunks.size(); ++c) {
        for (std::size_t step = 0; step < neighbors.size(); ++step) {
          const std::size_t k = (cursor + step) % neighbors.size();
          if (neighbors[k].buffer_map.has(chunks[c].seq) &&
              residual[k] >= chunks[c].size) {
            assign(c, k);
            cursor = (k + 1) % neighbors.size();
            break;
          }
        }
      }
      break;
    }
  }
  detail::finish_decision(d, chunks);
  return d;
}

// Throws std::logic_error when a decision violates the per-neighbor capacity
// bound, requests an unheld chunk, or strays outside the missing set.
inline void validate_decision(const ScheduleDecision& d,
                              std::span<const ChunkMeta> missing,
                              std::span<const NeighborView> neighbors) {
  std::map<ChunkSeq, const ChunkMeta*> by_seq;
  for (const ChunkMeta& c : missing) by_seq[c.seq] = &c;
  std::map<NodeId, int> load;
  for (const auto& [seq, nbr] : d.requests) {
    auto it = by_seq.find(seq);
    if (it == by_seq.end())
      throw std::logic_error("decision requests a chunk outside the missing set");
    const NeighborView* view = nullptr;
    for (const NeighborView& nb : neighbors)
      if (nb.neighbor_id == nbr) view = &nb;
    if (!view) throw std::logic_error("decision requests from an unknown neighbor");
    if (!view->buffer_map.has(seq))
      throw std::logic_error("decision requests an unheld chunk");
    load[nbr] += it->second->size;
    if (load[nbr] > view->est_download)
      throw std::logic_error("decision exceeds a neighbor's capacity");
  }
  for (const auto& [seq, meta] : by_seq) {
    (void)meta;
    if (d.requests.count(seq) + d.unassigned.count(seq) != 1)
      throw std::logic_error("decision does not partition the missing set");
  }
}

}  // namespace pullsched
