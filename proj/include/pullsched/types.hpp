#pragma once

#include <cstdint>

namespace pullsched {

using NodeId = std::uint32_t;
using ChunkSeq = std::uint64_t;
using Tick = std::int64_t;

}  // namespace pullsched
