#include "pullsched/sliding_window.hpp"

#include <vector>

#include <gtest/gtest.h>

using namespace pullsched;

TEST(SlidingWindow, InitialGeometry) {
  SlidingWindow w(2, 3);
  EXPECT_EQ(w.window_len(), 6u);
  EXPECT_EQ(w.playhead_seq(), 0u);
  EXPECT_EQ(w.frontier_seq(), 0u);
  EXPECT_TRUE(w.contains(0));
  EXPECT_TRUE(w.contains(5));
  EXPECT_FALSE(w.contains(6));
}

TEST(SlidingWindow, RejectsBadArgs) {
  EXPECT_THROW(SlidingWindow(0, 3), std::invalid_argument);
  EXPECT_THROW(SlidingWindow(2, 0), std::invalid_argument);
}

TEST(SlidingWindow, DeadlineIsEmissionPlusWindow) {
  SlidingWindow w(4, 10);
  EXPECT_EQ(w.deadline(0), 10);
  EXPECT_EQ(w.deadline(3), 10);
  EXPECT_EQ(w.deadline(4), 11);
  EXPECT_EQ(w.deadline(43), 20);
}

TEST(SlidingWindow, AdvanceByZeroIsNoop) {
  SlidingWindow w(1, 3);
  const auto expired = w.advance(0);
  EXPECT_TRUE(expired.empty());
  EXPECT_EQ(w.playhead_seq(), 0u);
}

TEST(SlidingWindow, NoExpiryWhenEverythingReceived) {
  SlidingWindow w(1, 3);
  for (ChunkSeq s = 0; s < 3; ++s) EXPECT_TRUE(w.mark_received(s));
  // Playhead after tick 4 is seq 1: seq 0 has left the window, received.
  const auto expired = w.advance(4);
  EXPECT_TRUE(expired.empty());
  EXPECT_EQ(w.playhead_seq(), 1u);
}

TEST(SlidingWindow, ReportsExpiredUnreceivedSeq) {
  // Window of 3 ticks at rate 1; everything except seq 7 is received as the
  // playhead sweeps by; the advance that passes seq 7 reports it.
  SlidingWindow w(1, 3);
  for (Tick t = 1; t <= 10; ++t) {
    w.advance(t);
    const ChunkSeq frontier = static_cast<ChunkSeq>(t);
    for (ChunkSeq s : w.missing(frontier))
      if (s != 7) EXPECT_TRUE(w.mark_received(s));
  }
  // seq 7 expires when the playhead moves past it: playhead(t=11) = 8.
  const auto expired = w.advance(11);
  EXPECT_EQ(expired, (std::vector<ChunkSeq>{7}));
}

TEST(SlidingWindow, AdvanceBackwardsThrows) {
  SlidingWindow w(1, 3);
  w.advance(5);
  EXPECT_THROW(w.advance(4), std::invalid_argument);
}

TEST(SlidingWindow, MissingHonorsFrontierAndReceptions) {
  SlidingWindow w(2, 3);  // window covers [0, 6)
  EXPECT_TRUE(w.missing(0).empty());
  EXPECT_EQ(w.missing(4), (std::vector<ChunkSeq>{0, 1, 2, 3}));
  EXPECT_TRUE(w.mark_received(1));
  EXPECT_TRUE(w.mark_received(2));
  EXPECT_EQ(w.missing(4), (std::vector<ChunkSeq>{0, 3}));
  // Frontier beyond the window is clipped to the window end.
  EXPECT_EQ(w.missing(100), (std::vector<ChunkSeq>{0, 3, 4, 5}));
}

TEST(SlidingWindow, MarkReceivedRejectsOutsideAndDuplicates) {
  SlidingWindow w(1, 4);
  EXPECT_FALSE(w.mark_received(4));  // outside [0, 4)
  EXPECT_TRUE(w.mark_received(2));
  EXPECT_FALSE(w.mark_received(2));  // duplicate
  w.advance(3);                      // playhead 0 -> still contains 2
  EXPECT_TRUE(w.received(2));
  w.advance(7);  // playhead 3; seq 2 has left the window
  EXPECT_FALSE(w.received(2));
}

TEST(SlidingWindow, ReceivedBitsSurviveAdvance) {
  SlidingWindow w(2, 3);
  EXPECT_TRUE(w.mark_received(4));
  EXPECT_TRUE(w.mark_received(5));
  w.advance(4);  // playhead seq 2, window [2, 8)
  EXPECT_TRUE(w.received(4));
  EXPECT_TRUE(w.received(5));
  EXPECT_FALSE(w.received(2));
  EXPECT_EQ(w.missing(8), (std::vector<ChunkSeq>{2, 3, 6, 7}));
}

TEST(SlidingWindow, BufferMapMirrorsWindow) {
  SlidingWindow w(2, 2);
  w.mark_received(1);
  w.mark_received(2);
  const BufferMap bm = w.to_buffer_map();
  EXPECT_EQ(bm.start_seq(), 0u);
  EXPECT_EQ(bm.size(), 4u);
  EXPECT_FALSE(bm.has(0));
  EXPECT_TRUE(bm.has(1));
  EXPECT_TRUE(bm.has(2));
  EXPECT_FALSE(bm.has(3));
}
