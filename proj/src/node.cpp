/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/node.hpp"

#include <stdexcept>
#include <string>

namespace leaksim {

std::string_view to_string(Phase phase) {
  switch (phase) {
  case Phase::Dormant:
    return "dormant";
  case Phase::Charging:
    return "charging";
  case Phase::Booting:
    return "booting";
  case Phase::Idle:
    return "idle";
  case Phase::Transmitting:
    return "transmitting";
  case Phase::Brownout:
    return "brownout";
  }
  return "unknown";
}

bool is_powered(Phase phase) {
  return phase == Phase::Booting || phase == Phase::Idle || phase == Phase::Transmitting;
}

void NodeConfig::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("firmware: ") + what);
  };
  require(v_off >= 0.0, "v_off must be non-negative");
  require(v_on > v_off, "v_on must exceed v_off");
  require(tx_interval > 0.0, "tx_interval must be positive");
  require(i_tx >= 0.0 && i_idle >= 0.0 && boot_surge_current >= 0.0,
          "currents must be non-negative");
  require(i_tx >= i_idle, "i_tx must be >= i_idle");
  require(boot_duration >= 0.0, "boot_duration must be non-negative");
  require(payload_len >= 0 && payload_len <= 255, "payload_len must be 0..255 bytes");
}

Amperes load_current(const NodeConfig &config, const NodeState &state) {
  switch (state.phase) {
  case Phase::Booting:
    return config.boot_surge_current;
  case Phase::Idle:
    return config.i_idle;
  case Phase::Transmitting:
    return config.i_tx;
  default:
    return 0.0;
  }
}

NodeState transition(const NodeConfig &config, const NodeState &state, Volts v_cap, SimTime t,
                     const RadioConfig &radio, bool harvesting) {
  auto enter = [&](Phase phase) {
    NodeState next = state;
    next.phase = phase;
    next.phase_entered_at = t;
    return next;
  };

  if (is_powered(state.phase) && v_cap < config.v_off)
    return enter(Phase::Brownout);

  switch (state.phase) {
  case Phase::Dormant:
    if (harvesting)
      return enter(Phase::Charging);
    break;
  case Phase::Charging:
    if (v_cap >= config.v_on)
      return enter(Phase::Booting);
    break;
  case Phase::Booting:
    if (t >= state.phase_entered_at + SimTime::from_seconds(config.boot_duration)) {
      NodeState next = enter(Phase::Idle);
      next.next_tx_at = t;
      return next;
    }
    break;
  case Phase::Idle:
    if (t >= state.next_tx_at)
      return enter(Phase::Transmitting);
    break;
  case Phase::Transmitting:
    if (t >= state.phase_entered_at + time_on_air_exact(radio, config.payload_len)) {
      NodeState next = enter(Phase::Idle);
      next.next_tx_at = state.next_tx_at + SimTime::from_seconds(config.tx_interval);
      return next;
    }
    break;
  case Phase::Brownout:
    if (v_cap >= config.v_on)
      return enter(Phase::Charging);
    break;
  }
  return state;
}

std::optional<SimTime> next_timed_edge(const NodeConfig &config, const NodeState &state,
                                       const RadioConfig &radio) {
  switch (state.phase) {
  case Phase::Booting:
    return state.phase_entered_at + SimTime::from_seconds(config.boot_duration);
  case Phase::Idle:
    return state.next_tx_at;
  case Phase::Transmitting:
    return state.phase_entered_at + time_on_air_exact(radio, config.payload_len);
  default:
    return std::nullopt;
  }
}

} // namespace leaksim
