#include "pullsched/buffer_map.hpp"

#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "pullsched/rng.hpp"

using namespace pullsched;

namespace {

std::vector<std::uint8_t> header(std::uint64_t start, std::uint32_t count) {
  std::vector<std::uint8_t> out;
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>((start >> (8 * i)) & 0xff));
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((count >> (8 * i)) & 0xff));
  return out;
}

}  // namespace

TEST(BufferMap, SetAndQuery) {
  BufferMap bm(100, 8);
  EXPECT_FALSE(bm.has(100));
  bm.set(100);
  bm.set(105);
  EXPECT_TRUE(bm.has(100));
  EXPECT_TRUE(bm.has(105));
  EXPECT_FALSE(bm.has(101));
  EXPECT_FALSE(bm.has(99));   // outside
  EXPECT_FALSE(bm.has(108));  // outside
  bm.set(105, false);
  EXPECT_FALSE(bm.has(105));
}

TEST(BufferMap, SetOutsideThrows) {
  BufferMap bm(10, 4);
  EXPECT_THROW(bm.set(9), std::out_of_range);
  EXPECT_THROW(bm.set(14), std::out_of_range);
}

TEST(BufferMap, DecodeWorkedExample) {
  // Bits 10110000 (LSB-first payload 0x0d) from start 12 -> {12, 14, 15}.
  std::vector<std::uint8_t> bytes = header(12, 8);
  bytes.push_back(0x0d);
  const BufferMap bm = decode_buffer_map(bytes);
  EXPECT_EQ(bm.start_seq(), 12u);
  EXPECT_EQ(bm.size(), 8u);
  EXPECT_TRUE(bm.has(12));
  EXPECT_FALSE(bm.has(13));
  EXPECT_TRUE(bm.has(14));
  EXPECT_TRUE(bm.has(15));
  EXPECT_FALSE(bm.has(16));
}

TEST(BufferMap, EncodeEmptyWindow) {
  const std::vector<std::uint8_t> bytes = encode_buffer_map(BufferMap(7, 0));
  EXPECT_EQ(bytes.size(), 12u);
  EXPECT_EQ(bytes[0], 7u);
}

TEST(BufferMap, PadBitsAreZero) {
  BufferMap bm(0, 10);
  for (ChunkSeq s = 0; s < 10; ++s) bm.set(s);
  const std::vector<std::uint8_t> bytes = encode_buffer_map(bm);
  ASSERT_EQ(bytes.size(), 14u);
  EXPECT_EQ(bytes[12], 0xff);
  EXPECT_EQ(bytes[13], 0x03);  // bits 10..15 padded with zeros
}

TEST(BufferMap, RoundTripRandomMaps) {
  Rng rng(1234);
  for (int trial = 0; trial < 1000; ++trial) {
    const ChunkSeq start = rng.bounded(1u << 20);
    const std::size_t count = rng.bounded(65);
    BufferMap bm(start, count);
    for (std::size_t i = 0; i < count; ++i)
      if (rng.bounded(2) == 0) bm.set(start + i);
    const BufferMap back = decode_buffer_map(encode_buffer_map(bm));
    ASSERT_TRUE(back == bm) << "trial " << trial;
  }
}

TEST(BufferMap, DecodeRejectsTruncatedHeader) {
  const std::vector<std::uint8_t> bytes(11, 0);
  EXPECT_THROW(decode_buffer_map(bytes), std::invalid_argument);
}

TEST(BufferMap, DecodeRejectsWrongPayloadLength) {
  std::vector<std::uint8_t> bytes = header(0, 9);  // needs 2 payload bytes
  bytes.push_back(0xff);
  EXPECT_THROW(decode_buffer_map(bytes), std::invalid_argument);
  bytes.push_back(0x01);
  EXPECT_NO_THROW(decode_buffer_map(bytes));
  bytes.push_back(0x00);  // one too many
  EXPECT_THROW(decode_buffer_map(bytes), std::invalid_argument);
}
