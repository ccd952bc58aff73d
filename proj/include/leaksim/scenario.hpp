/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaksim/harvester.hpp"
#include "leaksim/lora_phy.hpp"
#include "leaksim/node.hpp"
#include "leaksim/power.hpp"

namespace leaksim {

using Position = std::array<Meters, 2>;

/// Harvester with the file locations its overriding traces came from.
struct HarvesterSetup {
  HarvesterModel model;
  std::string ocv_trace_path;
  std::string scc_trace_path;
  bool operator==(const HarvesterSetup &) const = default;
};

struct NodeSpec {
  std::string id;
  Position position{0.0, 0.0};
  NodeConfig firmware;
  HarvesterSetup harvester;
  std::optional<WaterEvent> water;
  /// Onset is delayed by a seeded uniform draw in [0, onset_jitter).
  Seconds onset_jitter = 0.0;
  bool operator==(const NodeSpec &) const = default;
};

struct GatewaySpec {
  Position position{0.0, 0.0};
  LinkParams link;
  std::string sensitivity_table_path;
  bool operator==(const GatewaySpec &) const = default;
};

struct Scenario {
  std::vector<NodeSpec> nodes;
  GatewaySpec gateway;
  RadioConfig radio;
  ConverterParams converter;
  /// Initial storage state shared by every node.
  SupercapState supercap;
  Seconds horizon = 120.0;
  Seconds dt = 1e-3;
  std::uint64_t seed = 0;
  Decibels capture_threshold_db = 6.0;

  /// Section-level defaults nodes inherit from; kept so configs round-trip.
  NodeConfig firmware_defaults;
  HarvesterSetup harvester_defaults;
  std::vector<Millimeters> sweep_depths;

  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
  bool operator==(const Scenario &) const = default;
};

Meters distance_to_gateway(const Scenario &scenario, const NodeSpec &node);

/// Effective water onset per node after seeded jitter; nullopt when dry.
std::vector<std::optional<SimTime>> water_onsets(const Scenario &scenario);

} // namespace leaksim
