/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "leaksim/sim_time.hpp"

namespace leaksim {

/// One uplink frame on the air.
struct Transmission {
  std::size_t node = 0;
  SimTime start;
  SimTime duration;
  Hertz channel = 915e6;
  int sf = 7;
  DecibelMilliwatts rx_power_at_gateway = 0.0;

  SimTime end() const { return start + duration; }
};

/// Frames interfere when they share channel and spreading factor and their
/// half-open air intervals overlap.
bool interferes(const Transmission &a, const Transmission &b);

/// For each transmission, whether it survives interference: it must be at
/// least `capture_threshold_db` stronger than every frame it interferes with.
std::vector<bool> detect_collisions(std::span<const Transmission> transmissions,
                                    Decibels capture_threshold_db);

} // namespace leaksim
