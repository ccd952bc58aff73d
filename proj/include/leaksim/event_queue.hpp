/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "leaksim/sim_time.hpp"

namespace leaksim {

enum class EventKind { WaterOnset, StateCheck, TxStart, TxEnd, SimEnd };

inline constexpr std::size_t kAllNodes = std::numeric_limits<std::size_t>::max();

struct Event {
  SimTime time;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::StateCheck;
  std::size_t node = kAllNodes;
};

/// Min-queue ordered by (time, sequence). Sequence numbers follow insertion
/// order, so equal-time events pop first-in first-out.
class EventQueue {
public:
  Event schedule(SimTime time, EventKind kind, std::size_t node = kAllNodes);

  /// Throws std::logic_error when empty.
  Event next_event();

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }

private:
  struct Later {
    bool operator()(const Event &a, const Event &b) const {
      if (a.time != b.time)
        return a.time > b.time;
      return a.sequence > b.sequence;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_sequence_ = 0;
};

} // namespace leaksim
