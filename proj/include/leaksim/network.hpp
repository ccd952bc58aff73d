/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <string>
#include <vector>

#include "leaksim/collisions.hpp"
#include "leaksim/node.hpp"
#include "leaksim/scenario.hpp"

namespace leaksim {

enum class PacketOutcome { Delivered, Collided, OutOfRange };

std::string_view to_string(PacketOutcome outcome);

struct PacketRecord {
  Transmission tx;
  PacketOutcome outcome = PacketOutcome::Delivered;
};

struct SimResult {
  std::vector<NodeTrace> traces;
  std::vector<PacketRecord> packets;
  int packets_sent = 0;
  int packets_delivered = 0;
  int packets_collided = 0;
  int packets_out_of_range = 0;
  /// 1 when nothing was sent.
  double delivery_ratio = 1.0;
  std::vector<std::string> warnings;
};

struct RunOptions {
  bool record_samples = true;
  /// Stop as soon as every wetted node has activated.
  bool stop_at_activation = false;
};

/// Runs the whole scenario on one event queue. Frames still on air at the
/// horizon are dropped from the packet accounting.
SimResult run(const Scenario &scenario, const RunOptions &options = {});

/// Single-node convenience wrapper; the scenario must hold exactly one node
/// with a water event.
NodeTrace run_node(const Scenario &scenario, const RunOptions &options = {});

} // namespace leaksim
