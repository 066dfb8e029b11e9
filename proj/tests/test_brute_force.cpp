#include "pullsched/brute_force.hpp"

#include <vector>

#include <gtest/gtest.h>

#include "pullsched/matrix.hpp"
#include "pullsched/rng.hpp"

using namespace pullsched;

namespace {

// Availability of the five-chunk worked instance: neighbor 2 holds
// {1,2,3,5}, neighbor 3 holds {4,5}, neighbor 4 holds {1,4}; capacities
// (2,2,1) expand to unit rows (n2,n2,n3,n3,n4). Equal priorities 1.
WeightMatrix five_chunk_expanded() {
  const std::vector<std::vector<int>> holds{
      {1, 2, 3, 5}, {1, 2, 3, 5}, {4, 5}, {4, 5}, {1, 4}};
  WeightMatrix m(5, 5);
  for (std::size_t r = 0; r < 5; ++r)
    for (int chunk : holds[r]) m.set(r, static_cast<std::size_t>(chunk - 1), 1.0);
  return m;
}

}  // namespace

TEST(BruteForceMcap, SingleRowPicksMax) {
  const WeightMatrix m = WeightMatrix::dense({{1, 7, 3}});
  const Matching got = brute_force_mcap(m);
  EXPECT_EQ(got.row_to_col, (std::vector<int>{1}));
  EXPECT_DOUBLE_EQ(got.objective, 7.0);
}

TEST(BruteForceMcap, FiveChunkInstanceFullyCovered) {
  const Matching got = brute_force_mcap(five_chunk_expanded());
  EXPECT_DOUBLE_EQ(got.objective, 5.0);
  std::vector<char> covered(5, 0);
  for (int c : got.row_to_col) {
    ASSERT_GE(c, 0);
    covered[static_cast<std::size_t>(c)] = 1;
  }
  for (char x : covered) EXPECT_TRUE(x);
}

TEST(BruteForceMcap, AllForbiddenIsEmpty) {
  WeightMatrix m(2, 3);
  const Matching got = brute_force_mcap(m);
  EXPECT_EQ(got.row_to_col, (std::vector<int>{-1, -1}));
  EXPECT_DOUBLE_EQ(got.objective, 0.0);
}

TEST(BruteForceMcap, MoreRowsThanColumns) {
  // Two unit rows compete for one column; one stays unassigned.
  const WeightMatrix m = WeightMatrix::dense({{4}, {9}});
  const Matching got = brute_force_mcap(m);
  EXPECT_DOUBLE_EQ(got.objective, 9.0);
  EXPECT_EQ(got.row_to_col[0], -1);
  EXPECT_EQ(got.row_to_col[1], 0);
}

TEST(BruteForceMcap, SkipsNegativeCells) {
  // Leaving a row unassigned beats taking a negative cell.
  const WeightMatrix m = WeightMatrix::dense({{-2.0}});
  const Matching got = brute_force_mcap(m);
  EXPECT_EQ(got.row_to_col, (std::vector<int>{-1}));
  EXPECT_DOUBLE_EQ(got.objective, 0.0);
}

TEST(BruteForceMcap, RefusesHugeInstances) {
  WeightMatrix m(11, 11);
  for (std::size_t r = 0; r < 11; ++r)
    for (std::size_t c = 0; c < 11; ++c) m.set(r, c, 1.0);
  EXPECT_THROW(brute_force_mcap(m), std::invalid_argument);
}

TEST(BruteForceGap, CapacityBinds) {
  const WeightMatrix m = WeightMatrix::dense({{5, 3}});
  const std::vector<int> caps{1};
  const std::vector<int> sizes{1, 1};
  const GapSolution got = brute_force_gap(m, caps, sizes);
  EXPECT_EQ(got.chunk_to_row, (std::vector<int>{0, -1}));
  EXPECT_DOUBLE_EQ(got.objective, 5.0);
}

TEST(BruteForceGap, TwoNeighborsCoverBoth) {
  WeightMatrix m(2, 2);
  m.set(0, 0, 5.0);
  m.set(0, 1, 3.0);
  m.set(1, 0, 5.0);
  m.set(1, 1, 3.0);
  const std::vector<int> caps{1, 1};
  const std::vector<int> sizes{1, 1};
  const GapSolution got = brute_force_gap(m, caps, sizes);
  EXPECT_DOUBLE_EQ(got.objective, 8.0);
}

TEST(BruteForceGap, UnheldChunkStaysUnassigned) {
  WeightMatrix m(2, 2);
  m.set(0, 0, 2.0);
  m.set(1, 0, 2.0);  // column 1 has no holder
  const std::vector<int> caps{1, 1};
  const std::vector<int> sizes{1, 1};
  const GapSolution got = brute_force_gap(m, caps, sizes);
  EXPECT_EQ(got.chunk_to_row[1], -1);
  EXPECT_DOUBLE_EQ(got.objective, 2.0);
}

TEST(BruteForceGap, SolutionsRespectCapacities) {
  Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 1 + rng.bounded(3);
    const std::size_t cols = 1 + rng.bounded(4);
    WeightMatrix m(rows, cols);
    std::vector<int> caps;
    std::vector<int> sizes;
    for (std::size_t r = 0; r < rows; ++r) caps.push_back(rng.int_in(1, 4));
    for (std::size_t c = 0; c < cols; ++c) sizes.push_back(rng.int_in(1, 2));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (rng.bounded(2) == 0) m.set(r, c, static_cast<double>(rng.int_in(1, 9)));
    const GapSolution got = brute_force_gap(m, caps, sizes);
    std::vector<int> load(rows, 0);
    double value = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const int r = got.chunk_to_row[c];
      if (r < 0) continue;
      ASSERT_FALSE(m.is_forbidden(static_cast<std::size_t>(r), c));
      load[static_cast<std::size_t>(r)] += sizes[c];
      value += m.at(static_cast<std::size_t>(r), c);
    }
    for (std::size_t r = 0; r < rows; ++r) ASSERT_LE(load[r], caps[r]);
    EXPECT_DOUBLE_EQ(value, got.objective);
  }
}
