#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "pullsched/matrix.hpp"

namespace pullsched {

// Maximization Hungarian solver (Jonker-Volgenant shortest augmenting path
// with potentials, O(n^3)). Square matrices only; callers pad rectangular
// problems first. Forbidden cells are replaced internally by a penalty
// strictly dominating any feasible objective, so they end up in the matching
// only when no penalty-free perfect matching exists.
//
// Deterministic: rows are augmented in index order and column scans run in
// index order with strict-improvement updates, so equal-cost alternatives
// resolve toward the lowest row, then lowest column.
inline Matching hungarian_max(const WeightMatrix& w) {
  if (w.rows() != w.cols())
    throw std::invalid_argument("hungarian_max: matrix must be square");
  const std::size_t n = w.rows();
  Matching result;
  if (n == 0) return result;

  const double penalty = static_cast<double>(n) * (w.max_abs_weight() + 1.0) + 1.0;
  // Minimize cost = -weight.
  auto cost = [&](std::size_t r, std::size_t c) {
    return w.is_forbidden(r, c) ? penalty : -w.at(r, c);
  };

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // 1-based, 0 = free

  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      std::size_t j1 = 0;
      double delta = inf;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.row_to_col.assign(n, -1);
  for (std::size_t j = 1; j <= n; ++j)
    if (match[j] != 0) result.row_to_col[match[j] - 1] = static_cast<int>(j - 1);
  for (std::size_t r = 0; r < n; ++r) {
    const auto c = static_cast<std::size_t>(result.row_to_col[r]);
    result.objective += w.is_forbidden(r, c) ? -penalty : w.at(r, c);
  }
  return result;
}

}  // namespace pullsched
