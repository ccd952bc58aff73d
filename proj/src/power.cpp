/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace leaksim {

void ConverterParams::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("converter: ") + what);
  };
  require(efficiency > 0.0 && efficiency <= 1.0, "efficiency must lie in (0, 1]");
  require(v_target > 0.0, "v_target must be positive");
  require(v_in_min >= 0.0, "v_in_min must be non-negative");
  require(i_quiescent >= 0.0, "i_quiescent must be non-negative");
  require(v_floor > 0.0, "v_floor must be positive");
}

void SupercapState::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("supercap: ") + what);
  };
  require(capacitance > 0.0, "capacitance must be positive");
  require(voltage >= 0.0, "voltage must be non-negative");
  require(voltage <= v_max + 1e-9, "voltage exceeds the converter target");
  require(leak_conductance >= 0.0, "leak conductance must be non-negative");
}

Amperes converter_output_current(const ConverterParams &params, const HarvesterOutput &src,
                                 Volts v_cap) {
  if (src.v_oc < params.v_in_min || v_cap >= params.v_target || !(src.p_mpp > 0.0))
    return 0.0;
  const Amperes gross = params.efficiency * src.p_mpp / std::max(v_cap, params.v_floor);
  return std::max(gross - params.i_quiescent, 0.0);
}

SupercapState step_supercap(const SupercapState &state, Amperes i_in, Amperes i_load, Seconds dt) {
  if (!(dt > 0.0) || dt > kMaxStep * (1.0 + 1e-12))
    throw std::invalid_argument("step_supercap: dt must lie in (0, 10 ms]");
  SupercapState next = state;
  const Amperes i_leak = state.leak_conductance * state.voltage;
  const Volts v = state.voltage + (i_in - i_load - i_leak) * dt / state.capacitance;
  next.voltage = std::clamp(v, 0.0, state.v_max);
  return next;
}

Amperes regulated_input_current(const SupercapState &state, Amperes i_converter, Amperes i_load,
                                Seconds dt) {
  const Amperes headroom = (state.v_max - state.voltage) * state.capacitance / dt + i_load +
                           state.leak_conductance * state.voltage;
  return std::clamp(i_converter, 0.0, std::max(headroom, 0.0));
}

Seconds analytic_time_to_threshold(const ConverterParams &params, Watts p_in, Farads capacitance,
                                   Volts v0, Volts v_th) {
  if (v_th <= v0)
    return 0.0;
  const Watts p = params.efficiency * p_in;
  if (!(p > 0.0))
    return std::numeric_limits<double>::infinity();
  return capacitance * (v_th * v_th - v0 * v0) / (2.0 * p);
}

std::optional<Seconds> simulate_time_to_threshold(const ConverterParams &params,
                                                  const HarvesterOutput &src, SupercapState cap,
                                                  Volts v_th, Seconds dt, Seconds max_time) {
  if (cap.voltage >= v_th)
    return 0.0;
  const auto steps = static_cast<long long>(std::ceil(max_time / dt));
  for (long long k = 1; k <= steps; ++k) {
    const Amperes i_in = regulated_input_current(
        cap, converter_output_current(params, src, cap.voltage), 0.0, dt);
    cap = step_supercap(cap, i_in, 0.0, dt);
    if (cap.voltage >= v_th)
      return static_cast<double>(k) * dt;
  }
  return std::nullopt;
}

} // namespace leaksim
