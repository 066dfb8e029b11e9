#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pullsched/types.hpp"

namespace pullsched {

// Bookkeeping for issued chunk requests. A chunk is pending to exactly one
// neighbor; when a request period ends without delivery the chunk re-enters
// the missing set unless it expired in the meantime.
class PendingRequests {
 public:
  void issue(ChunkSeq seq, NodeId neighbor, Tick issued_at, Tick deadline) {
    auto [it, inserted] = pending_.try_emplace(seq, Entry{neighbor, issued_at, deadline});
    if (!inserted)
      throw std::logic_error("PendingRequests: chunk already pending");
  }

  bool fulfill(ChunkSeq seq) { return pending_.erase(seq) != 0; }

  std::optional<NodeId> pending_to(ChunkSeq seq) const {
    auto it = pending_.find(seq);
    if (it == pending_.end()) return std::nullopt;
    return it->second.neighbor;
  }

  std::size_t size() const { return pending_.size(); }

  // Clears requests issued before `now`. Unexpired ones are returned so they
  // can be re-requested; expired ones are silently dropped (they are counted
  // as loss by the window advance).
  std::vector<ChunkSeq> refresh(Tick now) {
    std::vector<ChunkSeq> again;
    for (auto it = pending_.begin(); it != pending_.end();) {
      if (it->second.issued_at < now) {
        if (it->second.deadline >= now) again.push_back(it->first);
        it = pending_.erase(it);
      } else {
        ++it;
      }
    }
    return again;
  }

 private:
  struct Entry {
    NodeId neighbor;
    Tick issued_at;
    Tick deadline;
  };
  std::map<ChunkSeq, Entry> pending_;
};

}  // namespace pullsched
