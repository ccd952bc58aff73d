/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/lora_phy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "leaksim/format.hpp"

namespace leaksim {

namespace {

bool supported_bandwidth(Hertz bw) { return bw == 125e3 || bw == 250e3 || bw == 500e3; }

// ceil(a / b) for b > 0.
int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }

// 2^sf / bw in ns. Exact for every supported bandwidth.
std::int64_t symbol_ticks(const RadioConfig &cfg) {
  return (std::int64_t{1} << cfg.sf) * 1'000'000'000LL / static_cast<std::int64_t>(cfg.bw);
}

} // namespace

void RadioConfig::validate() const {
  if (sf < 7 || sf > 12)
    throw std::invalid_argument("radio: spreading factor must lie in [7, 12]");
  if (!supported_bandwidth(bw))
    throw std::invalid_argument("radio: bandwidth must be 125, 250 or 500 kHz");
  if (cr_denominator < 5 || cr_denominator > 8)
    throw std::invalid_argument("radio: coding rate denominator must lie in [5, 8]");
  if (preamble_len < 0)
    throw std::invalid_argument("radio: preamble length must be non-negative");
  if (!(freq > 0.0))
    throw std::invalid_argument("radio: frequency must be positive");
}

SensitivityTable default_sensitivity_table() {
  SensitivityTable t;
  const double base125[] = {-124.0, -127.0, -130.0, -133.0, -135.0, -137.0};
  const double base250[] = {-121.0, -124.0, -127.0, -130.0, -132.0, -134.0};
  const double base500[] = {-118.0, -121.0, -124.0, -127.0, -129.0, -131.0};
  for (int sf = 7; sf <= 12; ++sf) {
    t[{sf, 125000}] = base125[sf - 7];
    t[{sf, 250000}] = base250[sf - 7];
    t[{sf, 500000}] = base500[sf - 7];
  }
  return t;
}

SensitivityTable load_sensitivity_table(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open sensitivity table '" + path + "'");
  SensitivityTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key))
      continue;
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    auto comma = key.find(',');
    double sf = 0, bw = 0, dbm = 0;
    if (comma == std::string::npos || !(fields >> value) || (fields >> extra) ||
        !parse_double(std::string_view(key).substr(0, comma), sf) ||
        !parse_double(std::string_view(key).substr(comma + 1), bw) || !parse_double(value, dbm))
      throw std::runtime_error(where + "expected '<sf>,<bw_hz> <dBm>'");
    if (dbm >= 0.0)
      throw std::runtime_error(where + "sensitivity must be negative");
    table[{static_cast<int>(sf), static_cast<long>(bw)}] = dbm;
  }
  if (table.empty())
    throw std::runtime_error(path + ": sensitivity table is empty");
  return table;
}

void LinkParams::validate() const {
  if (path_loss_exponent < 2.0)
    throw std::invalid_argument("link: path loss exponent must be >= 2");
  if (n_walls < 0)
    throw std::invalid_argument("link: wall count must be non-negative");
  for (const auto &[key, dbm] : sensitivity_table)
    if (dbm >= 0.0)
      throw std::invalid_argument("link: sensitivity values must be negative");
}

DecibelMilliwatts LinkParams::sensitivity(const RadioConfig &cfg) const {
  auto it = sensitivity_table.find({cfg.sf, static_cast<long>(cfg.bw)});
  if (it == sensitivity_table.end())
    throw std::invalid_argument("link: no sensitivity for SF" + std::to_string(cfg.sf) + "/" +
                                std::to_string(static_cast<long>(cfg.bw)) + " Hz");
  return it->second;
}

Seconds symbol_time(const RadioConfig &cfg) { return std::ldexp(1.0, cfg.sf) / cfg.bw; }

bool uses_low_data_rate_optimize(const RadioConfig &cfg) {
  if (cfg.low_data_rate_optimize)
    return *cfg.low_data_rate_optimize;
  return symbol_time(cfg) > 16e-3;
}

int payload_symbols(const RadioConfig &cfg, int payload_len) {
  const int de = uses_low_data_rate_optimize(cfg) ? 1 : 0;
  const int numerator = 8 * payload_len - 4 * cfg.sf + 28 + 16 * (cfg.crc_on ? 1 : 0) -
                        20 * (cfg.explicit_header ? 0 : 1);
  const int denominator = 4 * (cfg.sf - 2 * de);
  return 8 + std::max(ceil_div(numerator, denominator) * cfg.cr_denominator, 0);
}

SimTime time_on_air_exact(const RadioConfig &cfg, int payload_len) {
  if (payload_len < 0 || payload_len > 255)
    throw std::invalid_argument("time_on_air: payload must be 0..255 bytes");
  cfg.validate();
  const std::int64_t tsym = symbol_ticks(cfg);
  // Preamble is (preamble_len + 4.25) symbols; tsym is divisible by 4.
  const std::int64_t preamble = (4LL * cfg.preamble_len + 17) * (tsym / 4);
  return SimTime::from_ticks(preamble + payload_symbols(cfg, payload_len) * tsym);
}

DecibelMilliwatts received_power(const LinkParams &link, const RadioConfig &cfg,
                                 Meters distance) {
  if (!(distance >= 1.0))
    throw std::invalid_argument("received_power: distance must be >= 1 m");
  const Decibels loss = link.ref_loss_at_1m + 10.0 * link.path_loss_exponent * std::log10(distance) +
                        link.wall_loss * link.n_walls;
  return cfg.tx_power + cfg.antenna_gain - loss;
}

Decibels link_margin(const LinkParams &link, const RadioConfig &cfg, Meters distance) {
  return received_power(link, cfg, distance) - link.sensitivity(cfg) - link.noise_fade_margin;
}

std::optional<Meters> range_boundary(const LinkParams &link, const RadioConfig &cfg) {
  const Decibels at_ref = link_margin(link, cfg, 1.0);
  if (at_ref < 0.0)
    return std::nullopt;
  return std::pow(10.0, at_ref / (10.0 * link.path_loss_exponent));
}

} // namespace leaksim
