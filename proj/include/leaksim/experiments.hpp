/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "leaksim/network.hpp"
#include "leaksim/scenario.hpp"

namespace leaksim {

struct RunReport {
  std::string scenario_digest;
  std::vector<std::pair<std::string, std::optional<Seconds>>> activation_times;
  int packets_sent = 0;
  int packets_delivered = 0;
  int packets_collided = 0;
  int packets_out_of_range = 0;
  double delivery_ratio = 1.0;
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;
  double wall_clock_seconds = 0.0;
};

/// Runs the scenario and writes `trace_<id>.csv` per node plus `summary.txt`.
RunReport simulate_to_dir(const Scenario &scenario, const std::filesystem::path &out_dir);

struct SweepRow {
  Millimeters depth = 0.0;
  std::optional<Seconds> activation;
  Volts peak_v_cap = 0.0;
};

/// Re-runs the scenario with every node's water depth set to each value in
/// turn (dry nodes get water at t = 0). Rows report the first node.
std::vector<SweepRow> sweep_depth(const Scenario &base, std::span<const Millimeters> depths);

/// Activation time of the scenario's single node, or nullopt past the horizon.
std::optional<Seconds> activation_time(const Scenario &scenario);

struct Calibration {
  bool feasible = false;
  double efficiency = 0.0;
  std::optional<Seconds> activation;
  int iterations = 0;
};

/// Bisects converter efficiency in (0, 1] until the single node activates
/// within `tolerance` of `target`. Infeasible when even unit efficiency
/// activates later than that.
Calibration calibrate(const Scenario &base, Seconds target, Seconds tolerance = 0.5);

} // namespace leaksim
