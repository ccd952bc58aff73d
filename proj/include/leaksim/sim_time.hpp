/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>

namespace leaksim {

using Volts = double;
using Amperes = double;
using Watts = double;
using Joules = double;
using Ohms = double;
using Farads = double;
using Siemens = double;
using Seconds = double;
using Hertz = double;
using Meters = double;
using Millimeters = double;
using Decibels = double;
using DecibelMilliwatts = double;

/// Simulation timestamp with nanosecond resolution.
///
/// LoRa symbol times for every supported (sf, bw) pair are whole numbers of
/// nanoseconds, so airtimes, intervals and event times add exactly.
class SimTime {
public:
  constexpr SimTime() = default;

  static constexpr SimTime from_ticks(std::int64_t ns) { return SimTime{ns}; }

  /// Rounds to the nearest nanosecond.
  static SimTime from_seconds(Seconds s) {
    if (!std::isfinite(s) || std::fabs(s) > 9.0e9)
      throw std::invalid_argument("time value out of representable range");
    return SimTime{static_cast<std::int64_t>(std::llround(s * 1e9))};
  }

  constexpr std::int64_t ticks() const { return ns_; }
  constexpr Seconds seconds() const { return static_cast<double>(ns_) / 1e9; }

  constexpr SimTime operator+(SimTime o) const { return SimTime{ns_ + o.ns_}; }
  constexpr SimTime operator-(SimTime o) const { return SimTime{ns_ - o.ns_}; }
  constexpr SimTime &operator+=(SimTime o) {
    ns_ += o.ns_;
    return *this;
  }
  constexpr auto operator<=>(const SimTime &) const = default;

private:
  constexpr explicit SimTime(std::int64_t ns) : ns_(ns) {}
  std::int64_t ns_ = 0;
};

} // namespace leaksim
