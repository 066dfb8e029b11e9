#include "pullsched/pending.hpp"

#include <gtest/gtest.h>

using namespace pullsched;

TEST(Pending, IssueFulfillLifecycle) {
  PendingRequests p;
  EXPECT_EQ(p.size(), 0u);
  p.issue(5, 2, 10, 14);
  EXPECT_EQ(p.size(), 1u);
  ASSERT_TRUE(p.pending_to(5).has_value());
  EXPECT_EQ(*p.pending_to(5), 2u);
  EXPECT_FALSE(p.pending_to(6).has_value());
  EXPECT_TRUE(p.fulfill(5));
  EXPECT_FALSE(p.fulfill(5));
  EXPECT_EQ(p.size(), 0u);
}

TEST(Pending, DoubleIssueIsABug) {
  PendingRequests p;
  p.issue(5, 2, 10, 14);
  EXPECT_THROW(p.issue(5, 3, 10, 14), std::logic_error);
}

TEST(Pending, RefreshWhenAllFulfilled) {
  PendingRequests p;
  p.issue(1, 2, 10, 14);
  p.fulfill(1);
  EXPECT_TRUE(p.refresh(11).empty());
}

TEST(Pending, UnfulfilledUnexpiredReappears) {
  PendingRequests p;
  p.issue(7, 2, 10, 14);
  const auto again = p.refresh(11);
  ASSERT_EQ(again.size(), 1u);
  EXPECT_EQ(again[0], 7u);
  // The stale entry is gone, so the chunk can be requested again.
  EXPECT_FALSE(p.pending_to(7).has_value());
  EXPECT_NO_THROW(p.issue(7, 3, 11, 14));
}

TEST(Pending, ExpiredRequestDoesNotReappear) {
  PendingRequests p;
  p.issue(7, 2, 10, 12);
  const auto again = p.refresh(13);  // deadline 12 < now 13
  EXPECT_TRUE(again.empty());
  EXPECT_EQ(p.size(), 0u);
}

TEST(Pending, SameTickRequestsSurviveRefresh) {
  PendingRequests p;
  p.issue(3, 1, 10, 15);
  const auto again = p.refresh(10);  // only requests issued before `now` age out
  EXPECT_TRUE(again.empty());
  EXPECT_EQ(p.size(), 1u);
  EXPECT_TRUE(p.pending_to(3).has_value());
}

TEST(Pending, RefreshMixesOutcomes) {
  PendingRequests p;
  p.issue(1, 9, 5, 20);   // stale, still valid -> reappears
  p.issue(2, 9, 5, 6);    // stale, expired -> dropped silently
  p.issue(3, 9, 7, 20);   // fresh -> stays pending
  const auto again = p.refresh(7);
  EXPECT_EQ(again, (std::vector<ChunkSeq>{1}));
  EXPECT_EQ(p.size(), 1u);
  EXPECT_TRUE(p.pending_to(3).has_value());
}
