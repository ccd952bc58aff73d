/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>

#include "leaksim/harvester.hpp"
#include "leaksim/sim_time.hpp"

namespace leaksim {

/// Largest integration step accepted by step_supercap.
inline constexpr Seconds kMaxStep = 10e-3;

/// Averaged boost converter: harvested MPP power, scaled by a single
/// end-to-end efficiency, delivered as current into the storage node.
///
/// Component values of the reference board (22 uH inductor, 2 x 12 uF
/// output capacitors, 150 kHz switching) are not simulated.
struct ConverterParams {
  Volts v_target = 5.0;
  /// Fitted so the default single-node scenario reaches 3.7 V at about 50 s.
  double efficiency = 0.1103;
  Volts v_in_min = 0.3;
  Amperes i_quiescent = 0.0;
  /// Lower bound on the output voltage used to convert power to current.
  Volts v_floor = 0.5;

  void validate() const;
  bool operator==(const ConverterParams &) const = default;
};

struct SupercapState {
  Farads capacitance = 0.1;
  Volts voltage = 0.0;
  Siemens leak_conductance = 0.0;
  /// Clamp ceiling; mirrors ConverterParams::v_target.
  Volts v_max = 5.0;

  void validate() const;
  bool operator==(const SupercapState &) const = default;
};

struct PowerSample {
  SimTime t;
  Volts v_cap = 0.0;
  Amperes i_harvest_out = 0.0;
  Amperes i_load = 0.0;
};

/// Current pushed into the supercap by the converter, net of quiescent draw.
Amperes converter_output_current(const ConverterParams &params, const HarvesterOutput &src,
                                 Volts v_cap);

/// Forward-Euler charge balance. Throws std::invalid_argument unless
/// 0 < dt <= kMaxStep.
SupercapState step_supercap(const SupercapState &state, Amperes i_in, Amperes i_load,
                            Seconds dt);

/// Converter current limited so that one step of length `dt` lands on the
/// ceiling instead of overshooting it; models output regulation.
Amperes regulated_input_current(const SupercapState &state, Amperes i_converter,
                                Amperes i_load, Seconds dt);

inline Joules energy_stored(const SupercapState &s) {
  return 0.5 * s.capacitance * s.voltage * s.voltage;
}

/// Closed-form charging time at constant input power, ignoring leakage,
/// quiescent draw and the low-voltage current floor. Infinite when
/// `p_in * efficiency` is zero.
Seconds analytic_time_to_threshold(const ConverterParams &params, Watts p_in, Farads capacitance,
                                   Volts v0, Volts v_th);

/// Integrates a constant source into an unloaded capacitor until `v_th` is
/// reached. Returns the step-boundary time of the crossing, or nullopt past
/// `max_time`.
std::optional<Seconds> simulate_time_to_threshold(const ConverterParams &params,
                                                  const HarvesterOutput &src, SupercapState cap,
                                                  Volts v_th, Seconds dt, Seconds max_time);

} // namespace leaksim
