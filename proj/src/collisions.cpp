/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/collisions.hpp"

#include <algorithm>
#include <numeric>

namespace leaksim {

bool interferes(const Transmission &a, const Transmission &b) {
  return a.channel == b.channel && a.sf == b.sf && a.start < b.end() && b.start < a.end();
}

std::vector<bool> detect_collisions(std::span<const Transmission> transmissions,
                                    Decibels capture_threshold_db) {
  const std::size_t n = transmissions.size();
  std::vector<bool> survives(n, true);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return transmissions[a].start < transmissions[b].start;
  });

  // Sweep in start order, keeping frames still on air.
  std::vector<std::size_t> on_air;
  for (std::size_t idx : order) {
    const Transmission &cur = transmissions[idx];
    std::erase_if(on_air, [&](std::size_t j) { return transmissions[j].end() <= cur.start; });
    for (std::size_t j : on_air) {
      const Transmission &other = transmissions[j];
      if (!interferes(cur, other))
        continue;
      const Decibels diff = cur.rx_power_at_gateway - other.rx_power_at_gateway;
      if (diff < capture_threshold_db)
        survives[idx] = false;
      if (-diff < capture_threshold_db)
        survives[j] = false;
    }
    on_air.push_back(idx);
  }
  return survives;
}

} // namespace leaksim
