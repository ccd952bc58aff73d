/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/event_queue.hpp"

#include <stdexcept>

namespace leaksim {

Event EventQueue::schedule(SimTime time, EventKind kind, std::size_t node) {
  const Event e{time, next_sequence_++, kind, node};
  heap_.push(e);
  return e;
}

Event EventQueue::next_event() {
  if (heap_.empty())
    throw std::logic_error("event queue: pop from empty queue");
  Event e = heap_.top();
  heap_.pop();
  return e;
}

} // namespace leaksim
