#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "pullsched/matrix.hpp"

namespace pullsched {

// Exhaustive reference solvers. Deliberately independent of the Hungarian /
// knapsack implementations so they can serve as correctness oracles; only
// usable on small instances.

namespace detail {
constexpr std::size_t kMcapDimLimit = 10;
constexpr double kGapBranchLimit = 2e7;
}  // namespace detail

// Maximum-objective m-cardinality assignment by depth-first enumeration of
// injective row -> column maps. A row may stay unassigned (contributing 0);
// forbidden cells are never selected. Ties keep the first solution found
// (columns scanned in ascending order, "skip" last).
inline Matching brute_force_mcap(const WeightMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if (rows > detail::kMcapDimLimit || cols > detail::kMcapDimLimit)
    throw std::invalid_argument("brute_force_mcap: instance above enumeration budget");

  Matching best;
  best.row_to_col.assign(rows, -1);
  best.objective = 0.0;
  if (rows == 0 || cols == 0) return best;

  // Admissible bound: per-row best cell ignoring column conflicts.
  std::vector<double> suffix_bound(rows + 1, 0.0);
  for (std::size_t r = rows; r-- > 0;) {
    double row_max = 0.0;
    for (std::size_t c = 0; c < cols; ++c)
      if (!m.is_forbidden(r, c) && m.at(r, c) > row_max) row_max = m.at(r, c);
    suffix_bound[r] = suffix_bound[r + 1] + row_max;
  }

  std::vector<int> current(rows, -1);
  std::vector<char> used(cols, 0);
  bool have_best = false;

  auto dfs = [&](auto&& self, std::size_t r, double acc) -> void {
    if (have_best && acc + suffix_bound[r] <= best.objective) return;
    if (r == rows) {
      if (!have_best || acc > best.objective) {
        best.objective = acc;
        best.row_to_col = current;
        have_best = true;
      }
      return;
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (used[c] || m.is_forbidden(r, c)) continue;
      used[c] = 1;
      current[r] = static_cast<int>(c);
      self(self, r + 1, acc + m.at(r, c));
      current[r] = -1;
      used[c] = 0;
    }
    self(self, r + 1, acc);
  };
  dfs(dfs, 0, 0.0);
  return best;
}

// One feasible answer to the one-to-many assignment: chunk_to_row[c] is the
// serving row or -1 when the chunk stays unrequested.
struct GapSolution {
  std::vector<int> chunk_to_row;
  double objective = 0.0;
};

// Exact optimum of the capacity-constrained priority-maximization by
// enumerating, per chunk, every holder plus the "unrequested" option.
inline GapSolution brute_force_gap(const WeightMatrix& priorities,
                                   std::span<const int> capacities,
                                   std::span<const int> sizes) {
  const std::size_t rows = priorities.rows(), cols = priorities.cols();
  if (capacities.size() != rows)
    throw std::invalid_argument("brute_force_gap: capacities length mismatch");
  if (sizes.size() != cols)
    throw std::invalid_argument("brute_force_gap: sizes length mismatch");
  double branches = 1.0;
  for (std::size_t c = 0; c < cols; ++c) branches *= static_cast<double>(rows + 1);
  if (branches > detail::kGapBranchLimit)
    throw std::invalid_argument("brute_force_gap: instance above enumeration budget");

  GapSolution best;
  best.chunk_to_row.assign(cols, -1);
  std::vector<int> current(cols, -1);
  std::vector<int> residual(capacities.begin(), capacities.end());
  bool have_best = false;

  auto dfs = [&](auto&& self, std::size_t c, double acc) -> void {
    if (c == cols) {
      if (!have_best || acc > best.objective) {
        best.objective = acc;
        best.chunk_to_row = current;
        have_best = true;
      }
      return;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (priorities.is_forbidden(r, c)) continue;
      if (residual[r] < sizes[c]) continue;
      residual[r] -= sizes[c];
      current[c] = static_cast<int>(r);
      self(self, c + 1, acc + priorities.at(r, c));
      current[c] = -1;
      residual[r] += sizes[c];
    }
    self(self, c + 1, acc);
  };
  dfs(dfs, 0, 0.0);
  return best;
}

}  // namespace pullsched
