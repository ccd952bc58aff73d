/*
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leaksim/sim_time.hpp"

namespace leaksim {

/// Transient fit of the water-activated cell. The open-circuit voltage and
/// short-circuit current each ramp linearly from zero to their peak over
/// `t_rise`, then relax exponentially toward their steady value.
struct HarvesterParams {
  Volts v_peak = 1.65;
  Volts v_steady = 1.3;
  Amperes i_peak = 0.5;
  Amperes i_steady = 0.22;
  Seconds t_rise = 10.0;
  Seconds tau_decay = 30.0;
  Millimeters min_depth = 0.5;

  /// Throws std::invalid_argument naming the first violated bound.
  void validate() const;
  bool operator==(const HarvesterParams &) const = default;
};

struct WaterEvent {
  Seconds onset = 0.0;
  Millimeters depth = 1.0;
  bool operator==(const WaterEvent &) const = default;
};

struct HarvesterOutput {
  Volts v_oc = 0.0;
  Amperes i_sc = 0.0;
  Ohms r_int = 0.0;
  Watts p_mpp = 0.0;

  bool active() const { return i_sc > 0.0 && v_oc > 0.0; }
};

/// Piecewise-linear series over time since wetting; holds the end values
/// outside its support.
class PiecewiseLinear {
public:
  PiecewiseLinear() = default;
  /// Points must be strictly increasing in time and non-empty.
  explicit PiecewiseLinear(std::vector<std::pair<Seconds, double>> points);

  double operator()(Seconds t) const;
  const std::vector<std::pair<Seconds, double>> &points() const { return points_; }
  bool operator==(const PiecewiseLinear &) const = default;

private:
  std::vector<std::pair<Seconds, double>> points_;
};

/// Reads a two-column text series (seconds, value). Blank lines and `#`
/// comments are skipped; commas or whitespace separate the columns.
PiecewiseLinear load_series(const std::string &path);

/// Parametric cell plus optional measured traces that replace the
/// corresponding parametric curve.
struct HarvesterModel {
  HarvesterParams params;
  std::optional<PiecewiseLinear> ocv_trace;
  std::optional<PiecewiseLinear> scc_trace;
  bool operator==(const HarvesterModel &) const = default;
};

Volts open_circuit_voltage(const HarvesterParams &params, Seconds t_wet);
Amperes short_circuit_current(const HarvesterParams &params, Seconds t_wet);

/// Thevenin view of the cell at absolute time `t`. Zero when dry, before
/// onset, or when the water is shallower than `min_depth`.
HarvesterOutput sample(const HarvesterParams &params, const WaterEvent &event, Seconds t);
HarvesterOutput sample(const HarvesterModel &model, const WaterEvent &event, Seconds t);

} // namespace leaksim
