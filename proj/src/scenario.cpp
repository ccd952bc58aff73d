/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/scenario.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

namespace leaksim {

void Scenario::validate() const {
  if (!(horizon > 0.0))
    throw std::invalid_argument("simulation: horizon must be positive");
  if (!(dt > 0.0) || dt > kMaxStep)
    throw std::invalid_argument("simulation: dt must lie in (0, 10 ms]");
  if (SimTime::from_seconds(dt).ticks() <= 0)
    throw std::invalid_argument("simulation: dt is below the 1 ns time resolution");
  if (capture_threshold_db < 0.0)
    throw std::invalid_argument("simulation: capture threshold must be non-negative");
  radio.validate();
  converter.validate();
  supercap.validate();
  if (supercap.voltage > converter.v_target)
    throw std::invalid_argument("supercap: initial voltage exceeds the converter target");
  gateway.link.validate();
  (void)gateway.link.sensitivity(radio);

  std::set<std::string> ids;
  for (const auto &node : nodes) {
    if (node.id.empty())
      throw std::invalid_argument("node: empty id");
    if (!ids.insert(node.id).second)
      throw std::invalid_argument("node '" + node.id + "': duplicate id");
    node.firmware.validate();
    node.harvester.model.params.validate();
    if (node.water && (node.water->depth < 0.0 || node.water->onset < 0.0))
      throw std::invalid_argument("node '" + node.id + "': water depth and onset must be >= 0");
    if (node.onset_jitter < 0.0)
      throw std::invalid_argument("node '" + node.id + "': onset jitter must be >= 0");
    if (distance_to_gateway(*this, node) < 1.0)
      throw std::invalid_argument("node '" + node.id +
                                  "': must be at least 1 m away from the gateway");
  }
}

Meters distance_to_gateway(const Scenario &scenario, const NodeSpec &node) {
  return std::hypot(node.position[0] - scenario.gateway.position[0],
                    node.position[1] - scenario.gateway.position[1]);
}

std::vector<std::optional<SimTime>> water_onsets(const Scenario &scenario) {
  // Raw engine output is specified bit-for-bit, unlike std distributions.
  std::mt19937_64 gen(scenario.seed);
  std::vector<std::optional<SimTime>> onsets;
  onsets.reserve(scenario.nodes.size());
  for (const auto &node : scenario.nodes) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    if (!node.water) {
      onsets.emplace_back();
      continue;
    }
    onsets.push_back(SimTime::from_seconds(node.water->onset + u * node.onset_jitter));
  }
  return onsets;
}

} // namespace leaksim
