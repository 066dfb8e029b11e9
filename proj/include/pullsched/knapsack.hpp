#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pullsched {

struct KnapsackResult {
  std::vector<std::size_t> selected;  // ascending indices
  double value = 0.0;
};

// Exact 0/1 knapsack over integer capacity, O(n * capacity) dynamic program.
// Among optimal subsets the lexicographically smallest index set is returned,
// which for strictly positive values means an item is taken whenever taking it
// still permits an optimal completion.
inline KnapsackResult knapsack_max(std::span<const double> values,
                                   std::span<const int> weights,
                                   int capacity) {
  if (values.size() != weights.size())
    throw std::invalid_argument("knapsack_max: values/weights length mismatch");
  if (capacity < 0)
    throw std::invalid_argument("knapsack_max: negative capacity");
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (weights[i] < 1)
      throw std::invalid_argument("knapsack_max: weights must be >= 1");
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw std::invalid_argument("knapsack_max: values must be positive finite");
  }

  KnapsackResult result;
  if (n == 0 || capacity == 0) return result;

  // best[i][c] = optimum using items i..n-1 with capacity c.
  const std::size_t cols = static_cast<std::size_t>(capacity) + 1;
  std::vector<double> best((n + 1) * cols, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = 0; c < cols; ++c) {
      double skip = best[(i + 1) * cols + c];
      double take = -1.0;
      if (static_cast<std::size_t>(weights[i]) <= c)
        take = values[i] + best[(i + 1) * cols + (c - weights[i])];
      best[i * cols + c] = take > skip ? take : skip;
    }
  }

  result.value = best[0 * cols + capacity];
  std::size_t c = static_cast<std::size_t>(capacity);
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::size_t>(weights[i]) > c) continue;
    const double take = values[i] + best[(i + 1) * cols + (c - weights[i])];
    if (take >= best[(i + 1) * cols + c]) {
      result.selected.push_back(i);
      c -= static_cast<std::size_t>(weights[i]);
    }
  }
  return result;
}

// Swap point for a metaheuristic knapsack; the scheduler takes any callable
// with this contract.
using KnapsackFn = std::function<KnapsackResult(
    std::span<const double>, std::span<const int>, int)>;

}  // namespace pullsched
