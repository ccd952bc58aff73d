/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "leaksim/sim_time.hpp"

namespace leaksim {

struct RadioConfig {
  Hertz freq = 915e6;
  int sf = 7;
  Hertz bw = 250e3;
  /// 5..8, i.e. coding rate 4/5 .. 4/8.
  int cr_denominator = 5;
  int preamble_len = 8;
  bool explicit_header = true;
  bool crc_on = true;
  /// nullopt selects the automatic rule (on iff symbol time > 16 ms).
  std::optional<bool> low_data_rate_optimize;
  DecibelMilliwatts tx_power = 20.0;
  Decibels antenna_gain = 0.0;

  void validate() const;
  bool operator==(const RadioConfig &) const = default;
};

using SensitivityTable = std::map<std::pair<int, long>, DecibelMilliwatts>;

/// Typical LLCC68 / SX126x receiver sensitivities, keyed by (sf, bw in Hz).
SensitivityTable default_sensitivity_table();

/// Reads lines of the form `<sf>,<bw_hz> <dBm>`; `#` starts a comment.
SensitivityTable load_sensitivity_table(const std::string &path);

struct LinkParams {
  double path_loss_exponent = 3.0;
  Decibels ref_loss_at_1m = 31.7;
  Decibels wall_loss = 5.0;
  int n_walls = 0;
  SensitivityTable sensitivity_table = default_sensitivity_table();
  Decibels noise_fade_margin = 10.0;

  void validate() const;
  DecibelMilliwatts sensitivity(const RadioConfig &cfg) const;
  bool operator==(const LinkParams &) const = default;
};

Seconds symbol_time(const RadioConfig &cfg);
bool uses_low_data_rate_optimize(const RadioConfig &cfg);

/// Number of payload symbols including the 8 fixed header symbols.
int payload_symbols(const RadioConfig &cfg, int payload_len);

/// Exact frame duration. Throws std::invalid_argument for payloads outside
/// 0..255 bytes.
SimTime time_on_air_exact(const RadioConfig &cfg, int payload_len);

inline Seconds time_on_air(const RadioConfig &cfg, int payload_len) {
  return time_on_air_exact(cfg, payload_len).seconds();
}

inline Joules tx_energy(const RadioConfig &cfg, int payload_len, Volts v_supply, Amperes i_tx) {
  return time_on_air(cfg, payload_len) * v_supply * i_tx;
}

/// Log-distance path loss with a per-wall penalty. Throws for distances
/// below the 1 m reference.
DecibelMilliwatts received_power(const LinkParams &link, const RadioConfig &cfg,
                                 Meters distance);

/// Received power above sensitivity, less the fade margin.
Decibels link_margin(const LinkParams &link, const RadioConfig &cfg, Meters distance);

inline bool is_deliverable(const LinkParams &link, const RadioConfig &cfg, Meters distance) {
  return link_margin(link, cfg, distance) >= 0.0;
}

/// Distance at which the link margin reaches zero, or nullopt when the
/// margin is already negative at the reference distance.
std::optional<Meters> range_boundary(const LinkParams &link, const RadioConfig &cfg);

} // namespace leaksim
