/*
 * SPDX-License-Identifier: Apache-2.0
 */

#include "leaksim/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <stdexcept>

#include "leaksim/config.hpp"
#include "leaksim/report.hpp"

namespace leaksim {

namespace {

void write_file(const std::filesystem::path &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

} // namespace

RunReport simulate_to_dir(const Scenario &scenario, const std::filesystem::path &out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const SimResult result = run(scenario);

  RunReport report;
  report.scenario_digest = scenario_digest(scenario);
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < scenario.nodes.size(); ++i) {
    const NodeTrace &tr = result.traces[i];
    report.activation_times.emplace_back(
        scenario.nodes[i].id,
        tr.activation_time ? std::optional<Seconds>(tr.activation_time->seconds()) : std::nullopt);
    const auto path = out_dir / ("trace_" + scenario.nodes[i].id + ".csv");
    write_file(path, trace_csv(tr));
    report.outputs.push_back(path);
  }
  const auto summary = out_dir / "summary.txt";
  write_file(summary, summary_text(scenario, result));
  report.outputs.push_back(summary);

  report.packets_sent = result.packets_sent;
  report.packets_delivered = result.packets_delivered;
  report.packets_collided = result.packets_collided;
  report.packets_out_of_range = result.packets_out_of_range;
  report.delivery_ratio = result.delivery_ratio;
  report.warnings = result.warnings;
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SweepRow> sweep_depth(const Scenario &base, std::span<const Millimeters> depths) {
  if (base.nodes.empty())
    throw std::invalid_argument("sweep_depth: scenario has no nodes");
  std::vector<SweepRow> rows;
  for (Millimeters depth : depths) {
    Scenario sc = base;
    for (auto &node : sc.nodes) {
      if (!node.water)
        node.water = WaterEvent{0.0, depth};
      node.water->depth = depth;
    }
    RunOptions opt;
    opt.record_samples = false;
    const SimResult result = run(sc, opt);
    const NodeTrace &tr = result.traces.front();
    SweepRow row;
    row.depth = depth;
    if (tr.activation_time)
      row.activation = tr.activation_time->seconds();
    row.peak_v_cap = tr.peak_v_cap;
    rows.push_back(row);
  }
  return rows;
}

std::optional<Seconds> activation_time(const Scenario &scenario) {
  RunOptions opt;
  opt.record_samples = false;
  opt.stop_at_activation = true;
  const NodeTrace tr = run_node(scenario, opt);
  if (!tr.activation_time)
    return std::nullopt;
  return tr.activation_time->seconds();
}

Calibration calibrate(const Scenario &base, Seconds target, Seconds tolerance) {
  if (!(target > 0.0))
    throw std::invalid_argument("calibrate: target must be positive");
  Scenario sc = base;
  sc.horizon = std::max(sc.horizon, 2.0 * target + tolerance);

  Calibration cal;
  auto attempt = [&](double eta) {
    sc.converter.efficiency = eta;
    ++cal.iterations;
    return activation_time(sc);
  };

  auto at_unit = attempt(1.0);
  if (!at_unit || *at_unit > target + tolerance) {
    cal.activation = at_unit;
    return cal;
  }
  cal.feasible = true;
  if (*at_unit >= target - tolerance) {
    cal.efficiency = 1.0;
    cal.activation = at_unit;
    return cal;
  }

  // Activation time falls as efficiency rises.
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    const auto t = attempt(mid);
    if (!t || *t > target + tolerance) {
      lo = mid;
    } else if (*t < target - tolerance) {
      hi = mid;
    } else {
      cal.efficiency = mid;
      cal.activation = t;
      return cal;
    }
  }
  cal.efficiency = hi;
  sc.converter.efficiency = hi;
  cal.activation = activation_time(sc);
  return cal;
}

} // namespace leaksim
