#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pullsched/types.hpp"

namespace pullsched {

// Chunk availability a node gossips to its neighbors: one bit per seq from
// start_seq upward, 1 = held.
class BufferMap {
 public:
  BufferMap() = default;
  BufferMap(ChunkSeq start_seq, std::size_t bit_count)
      : start_(start_seq), bits_(bit_count, false) {}

  ChunkSeq start_seq() const { return start_; }
  std::size_t size() const { return bits_.size(); }

  bool has(ChunkSeq seq) const {
    if (seq < start_ || seq - start_ >= bits_.size()) return false;
    return bits_[static_cast<std::size_t>(seq - start_)];
  }

  void set(ChunkSeq seq, bool held = true) {
    if (seq < start_ || seq - start_ >= bits_.size())
      throw std::out_of_range("BufferMap::set: seq outside map");
    bits_[static_cast<std::size_t>(seq - start_)] = held;
  }

  bool operator==(const BufferMap&) const = default;

 private:
  ChunkSeq start_ = 0;
  std::vector<bool> bits_;
};

// Wire format: u64 LE start_seq, u32 LE bit_count, then ceil(bit_count/8)
// payload bytes with bit i at byte i/8, position i%8 (LSB first). Pad bits
// are written as zero.
inline std::vector<std::uint8_t> encode_buffer_map(const BufferMap& bm) {
  std::vector<std::uint8_t> out;
  const std::uint64_t start = bm.start_seq();
  const std::uint32_t count = static_cast<std::uint32_t>(bm.size());
  out.reserve(12 + (count + 7) / 8);
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>((start >> (8 * i)) & 0xff));
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((count >> (8 * i)) & 0xff));
  out.resize(12 + (count + 7) / 8, 0);
  for (std::uint32_t i = 0; i < count; ++i)
    if (bm.has(start + i)) out[12 + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  return out;
}

inline BufferMap decode_buffer_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12)
    throw std::invalid_argument("decode_buffer_map: truncated header");
  std::uint64_t start = 0;
  for (int i = 0; i < 8; ++i) start |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i) count |= static_cast<std::uint32_t>(bytes[8 + i]) << (8 * i);
  const std::size_t payload = (static_cast<std::size_t>(count) + 7) / 8;
  if (bytes.size() != 12 + payload)
    throw std::invalid_argument("decode_buffer_map: payload length mismatch");
  BufferMap bm(start, count);
  for (std::uint32_t i = 0; i < count; ++i)
    if ((bytes[12 + i / 8] >> (i % 8)) & 1) bm.set(start + i);
  return bm;
}

}  // namespace pullsched
