/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/harvester.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "leaksim/format.hpp"

namespace leaksim {

namespace {

double transient(double peak, double steady, Seconds t_rise, Seconds tau, Seconds t_wet) {
  if (t_wet <= 0.0)
    return 0.0;
  if (t_wet <= t_rise)
    return peak * (t_wet / t_rise);
  return steady + (peak - steady) * std::exp(-(t_wet - t_rise) / tau);
}

HarvesterOutput thevenin(Volts v_oc, Amperes i_sc) {
  HarvesterOutput out;
  if (!(v_oc > 0.0) || !(i_sc > 0.0))
    return out;
  out.v_oc = v_oc;
  out.i_sc = i_sc;
  out.r_int = v_oc / i_sc;
  out.p_mpp = v_oc * i_sc / 4.0;
  return out;
}

bool wet(const HarvesterParams &params, const WaterEvent &event, Seconds t) {
  return event.depth >= params.min_depth && t >= event.onset;
}

} // namespace

void HarvesterParams::validate() const {
  auto require = [](bool ok, const char *what) {
    if (!ok)
      throw std::invalid_argument(std::string("harvester: ") + what);
  };
  require(v_steady > 0.0, "v_steady must be positive");
  require(v_peak >= v_steady, "v_peak must be >= v_steady");
  require(i_steady > 0.0, "i_steady must be positive");
  require(i_peak >= i_steady, "i_peak must be >= i_steady");
  require(t_rise > 0.0, "t_rise must be positive");
  require(tau_decay > 0.0, "tau_decay must be positive");
  require(min_depth > 0.0, "min_depth must be positive");
}

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<Seconds, double>> points)
    : points_(std::move(points)) {
  if (points_.empty())
    throw std::invalid_argument("series must contain at least one point");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i].first > points_[i - 1].first))
      throw std::invalid_argument("series times must be strictly increasing");
}

double PiecewiseLinear::operator()(Seconds t) const {
  if (t <= points_.front().first)
    return points_.front().second;
  if (t >= points_.back().first)
    return points_.back().second;
  auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Seconds v, const auto &p) { return v < p.first; });
  auto lo = std::prev(hi);
  const double w = (t - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

PiecewiseLinear load_series(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open series file '" + path + "'");
  std::vector<std::pair<Seconds, double>> points;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a))
      continue;
    double t = 0.0, v = 0.0;
    if (!(fields >> b) || (fields >> extra) || !parse_double(a, t) || !parse_double(b, v))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected two numeric columns");
    points.emplace_back(t, v);
  }
  try {
    return PiecewiseLinear(std::move(points));
  } catch (const std::invalid_argument &e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

Volts open_circuit_voltage(const HarvesterParams &p, Seconds t_wet) {
  return transient(p.v_peak, p.v_steady, p.t_rise, p.tau_decay, t_wet);
}

Amperes short_circuit_current(const HarvesterParams &p, Seconds t_wet) {
  return transient(p.i_peak, p.i_steady, p.t_rise, p.tau_decay, t_wet);
}

HarvesterOutput sample(const HarvesterParams &params, const WaterEvent &event, Seconds t) {
  if (!wet(params, event, t))
    return {};
  const Seconds t_wet = t - event.onset;
  return thevenin(open_circuit_voltage(params, t_wet), short_circuit_current(params, t_wet));
}

HarvesterOutput sample(const HarvesterModel &model, const WaterEvent &event, Seconds t) {
  if (!wet(model.params, event, t))
    return {};
  const Seconds t_wet = t - event.onset;
  const Volts v = model.ocv_trace ? (*model.ocv_trace)(t_wet)
                                  : open_circuit_voltage(model.params, t_wet);
  const Amperes i = model.scc_trace ? (*model.scc_trace)(t_wet)
                                    : short_circuit_current(model.params, t_wet);
  return thevenin(v, i);
}

} // namespace leaksim
