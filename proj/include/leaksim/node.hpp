/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "leaksim/lora_phy.hpp"
#include "leaksim/power.hpp"
#include "leaksim/sim_time.hpp"

namespace leaksim {

enum class Phase { Dormant, Charging, Booting, Idle, Transmitting, Brownout };

std::string_view to_string(Phase phase);
bool is_powered(Phase phase);

/// Firmware thresholds and load profile.
struct NodeConfig {
  Volts v_on = 3.7;
  Volts v_off = 2.5;
  Seconds tx_interval = 10.0;
  Amperes i_tx = 0.080;
  Amperes i_idle = 0.0015;
  Amperes boot_surge_current = 0.120;
  Seconds boot_duration = 0.3;
  int payload_len = 12;

  void validate() const;
  bool operator==(const NodeConfig &) const = default;
};

struct NodeState {
  Phase phase = Phase::Dormant;
  SimTime phase_entered_at;
  /// Start of the pending (Idle) or current (Transmitting) uplink.
  SimTime next_tx_at;
  bool operator==(const NodeState &) const = default;
};

struct TxEvent {
  SimTime start;
  SimTime duration;
  SimTime end() const { return start + duration; }
};

struct NodeTrace {
  std::optional<SimTime> activation_time;
  std::vector<TxEvent> tx_events;
  std::vector<SimTime> brownout_events;
  /// Uplinks cut short by a brownout; never reach the air interface.
  int aborted_tx = 0;
  Volts peak_v_cap = 0.0;
  /// Row k covers (samples[k-1].t, samples[k].t]; row 0 is the initial state.
  std::vector<PowerSample> samples;
  std::vector<Phase> phases;
};

Amperes load_current(const NodeConfig &config, const NodeState &state);

/// Applies at most one lifecycle edge. Brownout takes precedence over the
/// timed edges. `harvesting` reports whether the cell currently produces
/// output and only matters while Dormant.
NodeState transition(const NodeConfig &config, const NodeState &state, Volts v_cap, SimTime t,
                     const RadioConfig &radio, bool harvesting = false);

/// Time at which the current phase's timed edge comes due, if it has one.
std::optional<SimTime> next_timed_edge(const NodeConfig &config, const NodeState &state,
                                       const RadioConfig &radio);

} // namespace leaksim
